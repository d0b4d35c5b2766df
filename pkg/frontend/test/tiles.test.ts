import { describe, expect, it } from "vitest";

import { TileCache, tileKey } from "../src/tiles.js";

function deferred<T>() {
  let resolve!: (value: T) => void;
  const promise = new Promise<T>((r) => (resolve = r));
  return { promise, resolve };
}

describe("tile cache", () => {
  it("keys tiles by layer, order, rect, and cell size", () => {
    const key = tileKey("allocation", 10, { x0: 0, y0: 0, x1: 1023, y1: 1023 }, 1);
    expect(key).toBe("allocation/10/0,0,1023,1023/1");
    expect(key).not.toBe(tileKey("allocation", 10, { x0: 0, y0: 0, x1: 1023, y1: 1023 }, 2));
  });

  it("fetches each key once and serves repeats from the cache", async () => {
    let loads = 0;
    const cache = new TileCache<string>(async (key) => {
      loads++;
      return `tile:${key}`;
    });
    expect(await cache.fetch("a")).toBe("tile:a");
    expect(await cache.fetch("a")).toBe("tile:a");
    expect(await cache.fetch("b")).toBe("tile:b");
    expect(loads).toBe(2);
    expect(cache.size).toBe(2);
  });

  it("keeps the newest completion when fetches for a key race", async () => {
    const pending: { key: string; resolve: (v: string) => void }[] = [];
    const cache = new TileCache<string>((key) => {
      const d = deferred<string>();
      pending.push({ key, resolve: d.resolve });
      return d.promise;
    });
    const first = cache.fetch("k");
    const second = cache.fetch("k");
    expect(pending).toHaveLength(2);
    pending[1].resolve("new");
    await second;
    pending[0].resolve("old"); // stale completion must not clobber the cache
    await first;
    expect(cache.peek("k")).toBe("new");
    expect(await cache.fetch("k")).toBe("new");
  });
});
