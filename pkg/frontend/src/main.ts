// Browser entry point: canvas tile compositing, drill-down navigation,
// hover tooltips, AS highlighting, and DDoS frame playback.

import {
  ApiError,
  decodeFrame,
  HttpApiClient,
  nonzeroCellTotal,
  urls,
  type ApiClient,
  type FrameGrid,
  type FramesResponse,
  type Rect,
} from "./api.js";
import {
  fullRect,
  highlightRects,
  initialState,
  tooltipText,
  ViewController,
} from "./state.js";
import { TileCache, tileKey } from "./tiles.js";

const AS_LAYER = "as_heights";
const AS_ORDER = 8;
const FRAME_INTERVAL = 60;
const FRAME_ORDER = 8;
const PLAY_MS = 400;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function loadImage(url: string): Promise<HTMLImageElement> {
  return new Promise((resolve, reject) => {
    const img = new Image();
    img.onload = () => resolve(img);
    img.onerror = () => reject(new Error(`tile fetch failed: ${url}`));
    img.src = url;
  });
}

class Viewer {
  private readonly controller = new ViewController(initialState());
  private readonly tiles: TileCache<HTMLImageElement>;
  private readonly canvas = el<HTMLCanvasElement>("map");
  private readonly ctx = this.canvas.getContext("2d")!;
  private readonly frameCanvas = el<HTMLCanvasElement>("frames");
  private readonly frameCtx = this.frameCanvas.getContext("2d")!;
  private readonly tooltip = el<HTMLDivElement>("tooltip");
  private readonly notice = el<HTMLSpanElement>("notice");
  private readonly scaleLabel = el<HTMLSpanElement>("scale");
  private readonly badge = el<HTMLSpanElement>("badge");
  private readonly scrubber = el<HTMLInputElement>("scrubber");

  private frames: FrameGrid[] = [];
  private eventCount = 0;
  private playTimer: number | null = null;
  private hoverToken = 0;

  constructor(private readonly api: ApiClient) {
    this.tiles = new TileCache((key) => {
      const [layer, order, rect, cellPx] = key.split("/");
      const [x0, y0, x1, y1] = rect.split(",").map(Number);
      return loadImage(this.api.tileUrl(layer, Number(order), { x0, y0, x1, y1 }, Number(cellPx)));
    });
  }

  async start(): Promise<void> {
    const layers = await this.api.layers();
    const select = el<HTMLSelectElement>("layer");
    for (const entry of layers) {
      const option = document.createElement("option");
      option.value = entry.name;
      option.textContent = entry.name;
      select.appendChild(option);
    }
    select.addEventListener("change", () => this.switchLayer(select.value));
    this.canvas.addEventListener("click", (ev) => this.onClick(ev));
    this.canvas.addEventListener("contextmenu", (ev) => {
      ev.preventDefault();
      this.showNotice(this.controller.zoomOut().notice);
      void this.redraw();
    });
    this.canvas.addEventListener("mousemove", (ev) => this.onHover(ev));
    this.canvas.addEventListener("mouseleave", () => {
      this.tooltip.style.display = "none";
      this.controller.setHover(null);
    });
    el<HTMLButtonElement>("zoom-out").addEventListener("click", () => {
      this.showNotice(this.controller.zoomOut().notice);
      void this.redraw();
    });
    el<HTMLButtonElement>("highlight").addEventListener("click", () => void this.onHighlight());
    el<HTMLButtonElement>("load-frames").addEventListener("click", () => void this.loadFrames());
    el<HTMLButtonElement>("play").addEventListener("click", () => this.togglePlay());
    this.scrubber.addEventListener("input", () => {
      this.showNotice(
        this.controller.scrubFrames(Number(this.scrubber.value), this.frames.length).notice,
      );
      this.drawFrame();
    });
    await this.redraw();
  }

  private showNotice(text: string | null): void {
    this.notice.textContent = text ?? "";
  }

  private switchLayer(layer: string): void {
    this.controller.setLayer(layer);
    if (layer === AS_LAYER && this.controller.state.order !== AS_ORDER) {
      // the AS map lives at the fixed 256x256 grid
      this.controller.state = {
        ...this.controller.state,
        order: AS_ORDER,
        rect: fullRect(AS_ORDER),
      };
    }
    void this.redraw();
  }

  private viewRect(): Rect {
    return this.controller.state.rect;
  }

  // screen <-> grid transforms (curve y grows upward; screen y downward)
  private cellAt(ev: MouseEvent): { x: number; y: number } {
    const bounds = this.canvas.getBoundingClientRect();
    const rect = this.viewRect();
    const w = rect.x1 - rect.x0 + 1;
    const h = rect.y1 - rect.y0 + 1;
    const fx = (ev.clientX - bounds.left) / bounds.width;
    const fy = (ev.clientY - bounds.top) / bounds.height;
    const x = rect.x0 + Math.min(w - 1, Math.max(0, Math.floor(fx * w)));
    const y = rect.y1 - Math.min(h - 1, Math.max(0, Math.floor(fy * h)));
    return { x, y };
  }

  private cellBox(cell: Rect): [number, number, number, number] {
    const rect = this.viewRect();
    const cw = this.canvas.width / (rect.x1 - rect.x0 + 1);
    const ch = this.canvas.height / (rect.y1 - rect.y0 + 1);
    const sx = (cell.x0 - rect.x0) * cw;
    const sy = (rect.y1 - cell.y1) * ch;
    return [sx, sy, (cell.x1 - cell.x0 + 1) * cw, (cell.y1 - cell.y0 + 1) * ch];
  }

  private onClick(ev: MouseEvent): void {
    if (this.controller.state.layer === AS_LAYER) {
      this.showNotice("the AS map has a single fixed scale");
      return;
    }
    const transition = this.controller.drillDown(this.cellAt(ev));
    this.showNotice(transition.notice);
    if (!transition.notice) void this.redraw();
  }

  private async onHover(ev: MouseEvent): Promise<void> {
    const cell = this.cellAt(ev);
    const state = this.controller.state;
    if (state.hover && state.hover.x === cell.x && state.hover.y === cell.y) {
      this.tooltip.style.left = `${ev.pageX + 12}px`;
      this.tooltip.style.top = `${ev.pageY + 12}px`;
      return;
    }
    this.controller.setHover(cell);
    if (state.layer === AS_LAYER) return;
    const token = ++this.hoverToken;
    try {
      const info = await this.api.cell(state.order, cell.x, cell.y);
      if (token !== this.hoverToken) return; // a newer hover superseded this one
      this.tooltip.textContent = tooltipText(info);
      this.tooltip.style.display = "block";
      this.tooltip.style.left = `${ev.pageX + 12}px`;
      this.tooltip.style.top = `${ev.pageY + 12}px`;
    } catch {
      this.tooltip.style.display = "none";
    }
  }

  private async onHighlight(): Promise<void> {
    const input = el<HTMLInputElement>("asn");
    if (!input.value) {
      this.controller.selectAsn(null);
      void this.redraw();
      return;
    }
    const asn = Number(input.value);
    const transition = this.controller.selectAsn(asn);
    this.showNotice(transition.notice);
    if (!transition.notice) await this.redraw();
  }

  private async redraw(): Promise<void> {
    const state = this.controller.state;
    this.scaleLabel.textContent =
      state.layer === AS_LAYER ? "AS grid" : `1:/${2 * state.order}`;
    const key = tileKey(state.layer, state.order, state.rect, 1);
    const image = await this.tiles.fetch(key);
    if (tileKey(this.controller.state.layer, this.controller.state.order, this.controller.state.rect, 1) !== key) {
      return; // view moved on while the tile was in flight
    }
    this.ctx.imageSmoothingEnabled = false;
    this.ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    this.ctx.drawImage(image, 0, 0, this.canvas.width, this.canvas.height);
    await this.drawHighlight();
  }

  private async drawHighlight(): Promise<void> {
    const state = this.controller.state;
    if (state.selectedAsn === null) return;
    let rects: Rect[];
    try {
      const order = state.layer === AS_LAYER ? AS_ORDER : state.order;
      const info = await this.api.asInfo(state.selectedAsn, order);
      rects = highlightRects(info, state.layer === AS_LAYER ? "as" : "ip");
    } catch (exc) {
      this.showNotice(exc instanceof ApiError ? exc.detail : String(exc));
      return;
    }
    this.ctx.strokeStyle = "#ffd24d";
    this.ctx.lineWidth = 2;
    for (const region of rects) {
      const [sx, sy, sw, sh] = this.cellBox(region);
      this.ctx.strokeRect(sx, sy, Math.max(sw, 2), Math.max(sh, 2));
    }
  }

  private async loadFrames(): Promise<void> {
    let body: FramesResponse;
    try {
      body = await this.api.frames(FRAME_INTERVAL, FRAME_ORDER);
    } catch (exc) {
      this.showNotice(exc instanceof ApiError ? exc.detail : String(exc));
      return;
    }
    this.frames = body.frames.map(decodeFrame);
    this.eventCount = body.event_count;
    this.scrubber.max = String(Math.max(0, this.frames.length - 1));
    this.scrubber.value = "0";
    this.scrubber.disabled = this.frames.length === 0;
    el<HTMLButtonElement>("play").disabled = this.frames.length === 0;
    this.controller.scrubFrames(0, this.frames.length);
    const total = this.frames.reduce((acc, f) => acc + nonzeroCellTotal(f), 0);
    this.badge.textContent =
      `${this.eventCount} events` + (total === this.eventCount ? " ✓" : ` (frames sum ${total})`);
    this.drawFrame();
  }

  private drawFrame(): void {
    if (this.frames.length === 0) return;
    const index = this.controller.state.frameIndex;
    const frame = this.frames[index];
    const w = frame.rect.x1 - frame.rect.x0 + 1;
    const h = frame.rect.y1 - frame.rect.y0 + 1;
    const px = this.frameCanvas.width / w;
    const ctx = this.frameCtx;
    ctx.fillStyle = "#0c0c10";
    ctx.fillRect(0, 0, this.frameCanvas.width, this.frameCanvas.height);
    const peak = Math.max(1, ...frame.values);
    ctx.fillStyle = "#ff5040";
    for (let row = 0; row < h; row++) {
      for (let col = 0; col < w; col++) {
        const value = frame.values[row * w + col];
        if (value === 0) continue;
        ctx.globalAlpha = 0.3 + (0.7 * value) / peak;
        ctx.fillRect(col * px, (h - 1 - row) * px, Math.ceil(px), Math.ceil(px));
      }
    }
    ctx.globalAlpha = 1;
    el<HTMLSpanElement>("frame-label").textContent =
      `frame ${index + 1}/${this.frames.length} [${frame.start}, ${frame.end})`;
    this.scrubber.value = String(index);
  }

  private togglePlay(): void {
    if (this.playTimer !== null) {
      window.clearInterval(this.playTimer);
      this.playTimer = null;
      return;
    }
    if (this.frames.length === 0) return;
    this.playTimer = window.setInterval(() => {
      const next = (this.controller.state.frameIndex + 1) % this.frames.length;
      this.controller.scrubFrames(next, this.frames.length);
      this.drawFrame();
    }, PLAY_MS);
  }
}

// also handy from the devtools console
export { urls };

const viewer = new Viewer(new HttpApiClient());
viewer.start().catch((exc) => {
  el<HTMLSpanElement>("notice").textContent = `failed to start: ${exc}`;
});
