import { readFileSync } from "node:fs";

import { decode, type Hello, type Msg } from "../src/protocol.js";

const FIXTURE = new URL("./fixtures/short.cobotlog", import.meta.url);

export function fixtureLines(): string[] {
  return readFileSync(FIXTURE, "utf8").split("\n").filter((l) => l !== "");
}

export function fixtureMessages(): Msg[] {
  return fixtureLines().map(decode);
}

export function fixtureHello(): Hello {
  const first = fixtureMessages()[0]!;
  if (first.tag !== "hello") {
    throw new Error("fixture must start with hello");
  }
  return first;
}
