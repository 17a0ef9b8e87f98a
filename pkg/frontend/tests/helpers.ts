import { readFileSync } from "node:fs";

export function fixture<T>(name: string): T {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as T;
}

/** Minimal fetch stand-in that replays canned JSON bodies. */
export function fakeFetch(
  routes: Record<string, { status?: number; body: unknown }>,
  log: string[] = [],
) {
  return async (url: string, init?: RequestInit): Promise<Response> => {
    log.push(`${init?.method ?? "GET"} ${url}`);
    const hit = Object.entries(routes).find(([prefix]) => url.startsWith(prefix));
    if (!hit) {
      throw new Error(`no fake route for ${url}`);
    }
    const { status = 200, body } = hit[1];
    return {
      ok: status < 400,
      status,
      json: async () => body,
    } as Response;
  };
}
