// View state and its transitions: drill-down/zoom-out with an exact
// history stack, frame scrubbing, and AS highlighting.
//
// Everything here is plain screen/viewport arithmetic; cell semantics
// (prefixes, regions, resolution) always come from the API.

import type { AsInfo, CellInfo, Rect } from "./api.js";

export const MAX_ORDER = 16;
export const DRILL_STEP = 4;
export const MAX_MAPPABLE_ASN = 65536; // AS grid covers 16-bit ASNs

export interface ViewState {
  layer: string;
  order: number;
  rect: Rect; // visible window in grid cells at `order`
  hover: { x: number; y: number } | null;
  selectedAsn: number | null;
  frameIndex: number;
}

export function fullRect(order: number): Rect {
  const side = 1 << order;
  return { x0: 0, y0: 0, x1: side - 1, y1: side - 1 };
}

export function rectEquals(a: Rect, b: Rect): boolean {
  return a.x0 === b.x0 && a.y0 === b.y0 && a.x1 === b.x1 && a.y1 === b.y1;
}

export function initialState(layer = "allocation", order = 10): ViewState {
  return {
    layer,
    order,
    rect: fullRect(order),
    hover: null,
    selectedAsn: null,
    frameIndex: 0,
  };
}

// keep the viewport span, center it on (cx, cy), clamp into the grid
function centeredRect(cx: number, cy: number, width: number, height: number, order: number): Rect {
  const side = 1 << order;
  const w = Math.min(width, side);
  const h = Math.min(height, side);
  let x0 = Math.round(cx - w / 2);
  let y0 = Math.round(cy - h / 2);
  x0 = Math.max(0, Math.min(x0, side - w));
  y0 = Math.max(0, Math.min(y0, side - h));
  return { x0, y0, x1: x0 + w - 1, y1: y0 + h - 1 };
}

export function clampFrameIndex(index: number, frameCount: number): number {
  if (frameCount <= 0) return 0;
  return Math.max(0, Math.min(Math.floor(index), frameCount - 1));
}

export interface Transition {
  state: ViewState;
  notice: string | null;
}

export class ViewController {
  state: ViewState;
  private stack: ViewState[] = [];

  constructor(state: ViewState = initialState()) {
    this.state = state;
  }

  get depth(): number {
    return this.stack.length;
  }

  // Refine on the clicked cell: order steps by +4 (to at most 16) and the
  // viewport, keeping its span, re-centers on the cell's children block.
  drillDown(cell: { x: number; y: number }): Transition {
    const prev = this.state;
    if (prev.order >= MAX_ORDER) {
      return { state: prev, notice: `already at maximum order ${MAX_ORDER}` };
    }
    const order = Math.min(prev.order + DRILL_STEP, MAX_ORDER);
    const scale = 1 << (order - prev.order);
    const cx = cell.x * scale + scale / 2;
    const cy = cell.y * scale + scale / 2;
    const width = prev.rect.x1 - prev.rect.x0 + 1;
    const height = prev.rect.y1 - prev.rect.y0 + 1;
    this.stack.push(prev);
    this.state = {
      ...prev,
      order,
      rect: centeredRect(cx, cy, width, height, order),
      hover: null,
    };
    return { state: this.state, notice: null };
  }

  zoomOut(): Transition {
    const prior = this.stack.pop();
    if (prior === undefined) {
      return { state: this.state, notice: "already at the outermost view" };
    }
    this.state = prior;
    return { state: this.state, notice: null };
  }

  setLayer(layer: string): void {
    this.state = { ...this.state, layer };
  }

  setHover(cell: { x: number; y: number } | null): void {
    this.state = { ...this.state, hover: cell };
  }

  scrubFrames(index: number, frameCount: number): Transition {
    if (frameCount <= 0) {
      return { state: this.state, notice: "no frames loaded" };
    }
    this.state = { ...this.state, frameIndex: clampFrameIndex(index, frameCount) };
    return { state: this.state, notice: null };
  }

  selectAsn(asn: number | null): Transition {
    if (asn !== null && asn >= MAX_MAPPABLE_ASN) {
      return {
        state: this.state,
        notice: `ASN ${asn} is not mappable (AS grid covers 16-bit ASNs)`,
      };
    }
    this.state = { ...this.state, selectedAsn: asn };
    return { state: this.state, notice: null };
  }
}

export function tooltipText(info: CellInfo): string {
  const parts = [info.cidr];
  if (info.asn !== null) parts.push(`AS${info.asn}`);
  const category = info.attrs?.category ?? info.attrs?.designation;
  if (category !== undefined) parts.push(category);
  return parts.join(" · ");
}

// overlay rects for a selected ASN: prefix regions on the IP map, the
// single AS-grid cell on the AS map (both straight from the API response)
export function highlightRects(info: AsInfo, map: "ip" | "as"): Rect[] {
  if (map === "as") {
    if (!info.cell) return [];
    return [{ x0: info.cell.x, y0: info.cell.y, x1: info.cell.x, y1: info.cell.y }];
  }
  return info.regions ?? [];
}
