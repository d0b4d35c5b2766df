// Tile cache keyed by (layer, order, rect, cell_px) with last-write-wins
// completion: when the same key is requested again while an earlier fetch
// is still in flight, only the newest fetch may populate the cache.

import type { Rect } from "./api.js";

export function tileKey(layer: string, order: number, rect: Rect, cellPx: number): string {
  return `${layer}/${order}/${rect.x0},${rect.y0},${rect.x1},${rect.y1}/${cellPx}`;
}

export class TileCache<T> {
  private tiles = new Map<string, T>();
  private latest = new Map<string, number>();
  private seq = 0;

  constructor(private readonly load: (key: string) => Promise<T>) {}

  get size(): number {
    return this.tiles.size;
  }

  peek(key: string): T | undefined {
    return this.tiles.get(key);
  }

  async fetch(key: string): Promise<T> {
    const cached = this.tiles.get(key);
    if (cached !== undefined) return cached;
    const ticket = ++this.seq;
    this.latest.set(key, ticket);
    const tile = await this.load(key);
    if (this.latest.get(key) === ticket) {
      this.tiles.set(key, tile);
      this.latest.delete(key);
    }
    return this.tiles.get(key) ?? tile;
  }

  clear(): void {
    this.tiles.clear();
    this.latest.clear();
  }
}
