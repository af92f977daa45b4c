export type Meta = {
  m: number;
  n1: number | null;
  n2: number | null;
  alpha: number;
  templates: string[];
  lambda: Record<string, number>;
  methods: string[];
  dataset_digest: Record<string, string>;
};

export type VolcanoPoint = {
  id: string;
  p: number;
  log_fc: number | null;
};

export type SelectionRequest = {
  ids?: string[];
  indices?: number[];
  top_k?: number;
  fc_above?: number;
  fc_below?: number;
  bh_level?: number;
};

export type BoundRequest = {
  selection: SelectionRequest;
  method: string;
  template?: string;
  k0?: number;
};

export type BoundResponse = {
  name: string;
  size: number;
  V: number;
  tp_lower: number;
  fdp_upper: number;
  method: string;
  lambda: number | null;
  ids: string[];
};

export type EnvelopeResponse = {
  k: number[];
  V: number[];
  tp_lower: number[];
  fdp_upper: number[];
  method: string;
  order_ids: string[];
};
