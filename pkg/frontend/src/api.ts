// Typed client for the map service's /api/v1 endpoints.
//
// All coordinate math lives server-side; this module only moves JSON and
// decodes the run-length-encoded frame payloads.

export interface Rect {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export interface CellRef {
  order: number;
  x: number;
  y: number;
}

export interface CellInfo {
  cidr: string;
  attrs: Record<string, string> | null;
  asn: number | null;
  children: CellRef[];
}

export interface ResolveInfo {
  ip?: string;
  cells: Record<string, { x: number; y: number }>;
  attrs: Record<string, string> | null;
  asn: number | null;
}

export interface LayerEntry {
  name: string;
  kind: string;
  orders: number[];
  source: string;
  built: number | null;
}

export interface AsLink {
  a: number;
  b: number;
  relationship: string;
}

export interface AsInfo {
  asn: number;
  height: number;
  prefixes: string[];
  links: AsLink[];
  mappable: boolean;
  regions?: Rect[];
  cell?: { x: number; y: number };
}

export type RleRuns = [number, number][];

export interface FrameEnvelope {
  start: number;
  end: number;
  order: number;
  kind: string;
  rect?: [number, number, number, number];
  values: RleRuns;
}

export interface FramesResponse {
  layer: string;
  interval: number;
  order: number;
  event_count: number;
  frames: FrameEnvelope[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly error: string,
    readonly detail: string,
  ) {
    super(detail || error);
  }
}

// URL builders shared by the HTTP client and the recorded-response test
// stub, so both address the exact same request strings.
export const urls = {
  layers: () => "/api/v1/layers",
  cell: (order: number, x: number, y: number) => `/api/v1/cell?order=${order}&x=${x}&y=${y}`,
  resolve: (ip: string) => `/api/v1/resolve?ip=${ip}`,
  frames: (interval: number, order: number) =>
    `/api/v1/frames?layer=events&interval=${interval}&order=${order}`,
  asInfo: (asn: number, order?: number) =>
    order === undefined ? `/api/v1/as/${asn}` : `/api/v1/as/${asn}?order=${order}`,
  tile: (layer: string, order: number, rect: Rect, cellPx: number) =>
    `/api/v1/tile?layer=${layer}&order=${order}` +
    `&x0=${rect.x0}&y0=${rect.y0}&x1=${rect.x1}&y1=${rect.y1}&cell_px=${cellPx}`,
};

export interface ApiClient {
  layers(): Promise<LayerEntry[]>;
  cell(order: number, x: number, y: number): Promise<CellInfo>;
  resolve(ip: string): Promise<ResolveInfo>;
  frames(interval: number, order: number): Promise<FramesResponse>;
  asInfo(asn: number, order?: number): Promise<AsInfo>;
  tileUrl(layer: string, order: number, rect: Rect, cellPx: number): string;
}

export class HttpApiClient implements ApiClient {
  constructor(private readonly base: string = "") {}

  private async get<T>(url: string): Promise<T> {
    const resp = await fetch(this.base + url);
    const body = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, body.error ?? "error", body.detail ?? "");
    }
    return body as T;
  }

  async layers(): Promise<LayerEntry[]> {
    const body = await this.get<{ layers: LayerEntry[] }>(urls.layers());
    return body.layers;
  }

  cell(order: number, x: number, y: number): Promise<CellInfo> {
    return this.get(urls.cell(order, x, y));
  }

  resolve(ip: string): Promise<ResolveInfo> {
    return this.get(urls.resolve(ip));
  }

  frames(interval: number, order: number): Promise<FramesResponse> {
    return this.get(urls.frames(interval, order));
  }

  asInfo(asn: number, order?: number): Promise<AsInfo> {
    return this.get(urls.asInfo(asn, order));
  }

  tileUrl(layer: string, order: number, rect: Rect, cellPx: number): string {
    return this.base + urls.tile(layer, order, rect, cellPx);
  }
}

export function decodeRuns(runs: RleRuns): number[] {
  const out: number[] = [];
  for (const [count, value] of runs) {
    for (let i = 0; i < count; i++) out.push(value);
  }
  return out;
}

export interface FrameGrid {
  start: number;
  end: number;
  rect: Rect;
  values: number[]; // row-major over rect, bottom row first
}

export function decodeFrame(env: FrameEnvelope): FrameGrid {
  const side = 1 << env.order;
  const [x0, y0, x1, y1] = env.rect ?? [0, 0, side - 1, side - 1];
  const values = decodeRuns(env.values);
  const expected = (x1 - x0 + 1) * (y1 - y0 + 1);
  if (values.length !== expected) {
    throw new Error(`frame payload has ${values.length} cells, expected ${expected}`);
  }
  return { start: env.start, end: env.end, rect: { x0, y0, x1, y1 }, values };
}

// total of the nonzero cells (zeros contribute nothing, so this is the
// value sum) — the quantity the event-count badge is checked against
export function nonzeroCellTotal(grid: FrameGrid): number {
  return grid.values.reduce((acc, v) => acc + v, 0);
}
