/** Error banner with a retry action; failed queries leave the previous
 *  numbers greyed rather than wiped. */
export class StatusBanner {
  private readonly el: HTMLDivElement;

  constructor(container: HTMLElement) {
    this.el = document.createElement("div");
    this.el.className = "status-banner hidden";
    container.appendChild(this.el);
  }

  showError(message: string, onRetry: () => void): void {
    this.el.replaceChildren();
    this.el.classList.remove("hidden");
    const text = document.createElement("span");
    text.textContent = message;
    const retry = document.createElement("button");
    retry.type = "button";
    retry.textContent = "retry";
    retry.addEventListener("click", () => {
      this.clear();
      onRetry();
    });
    this.el.append(text, retry);
  }

  clear(): void {
    this.el.classList.add("hidden");
    this.el.replaceChildren();
  }
}

export function markStale(el: HTMLElement, stale: boolean): void {
  el.classList.toggle("stale", stale);
}
