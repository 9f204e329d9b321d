/** End-to-end against a real `amocqa serve` process.
 *
 * A tiny in-process HTTP stub stands in for a trained model adapter so
 * the engine toggle can be exercised without any training artifacts.
 */

import { type ChildProcess, spawn } from "node:child_process";
import { createServer, type IncomingMessage, type Server, type ServerResponse } from "node:http";
import type { AddressInfo } from "node:net";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiError, Client, parseErrorDetail } from "../src/api.js";
import { crossesZero, overlay } from "../src/chart.js";
import { answerBadge, formSuggestions, paramDiffLegend, parseErrorPointer } from "../src/format.js";
import { Session } from "../src/session.js";

const KNOWN_QUESTION = "What is the value of M_n at time step 4000 if Fwn is 5000?";
const KNOWN_PROGRAM = "FinalValue(four_box_model(SetTo(N,4000),SetTo(Fwn,5000)),M_n)";

// the stub answers every QTP request with this clause order, which is
// valid but deliberately different from the reference translation
const STUB_PROGRAM_TOKENS = [
  "FinalValue", "(", "four_box_model", "(",
  "SetTo", "(", "Fwn", ",", "VALUE", ")", ",",
  "SetTo", "(", "N", ",", "VALUE", ")", ")", ",", "M_n", ")",
];

let serviceProcess: ChildProcess;
let stubServer: Server;
let stubRequests = 0;
let client: Client;

function readBody(request: IncomingMessage): Promise<string> {
  return new Promise((resolve, reject) => {
    const chunks: Buffer[] = [];
    request.on("data", (chunk) => chunks.push(chunk));
    request.on("end", () => resolve(Buffer.concat(chunks).toString("utf-8")));
    request.on("error", reject);
  });
}

async function handleStub(request: IncomingMessage, response: ServerResponse): Promise<void> {
  if (request.method !== "POST" || request.url !== "/predict") {
    response.writeHead(404).end();
    return;
  }
  const body = JSON.parse(await readBody(request)) as {
    direction: string;
    tokens: string[];
    values: string[];
  };
  stubRequests += 1;
  if (body.direction !== "QTP") {
    response.writeHead(400).end();
    return;
  }
  response
    .writeHead(200, { "Content-Type": "application/json" })
    .end(JSON.stringify({ tokens: STUB_PROGRAM_TOKENS, values: body.values }));
}

async function waitForHealth(base: string): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt += 1) {
    try {
      const response = await fetch(`${base}/healthz`);
      if (response.ok) return;
    } catch {
      // not listening yet
    }
    await new Promise((resolve) => setTimeout(resolve, 300));
  }
  throw new Error(`service at ${base} never became healthy`);
}

beforeAll(async () => {
  stubServer = createServer((request, response) => {
    void handleStub(request, response);
  });
  await new Promise<void>((resolve) => stubServer.listen(0, "127.0.0.1", resolve));
  const stubPort = (stubServer.address() as AddressInfo).port;

  const servicePort = 20000 + (process.pid % 10000);
  serviceProcess = spawn("amocqa", ["serve", "--port", String(servicePort)], {
    env: { ...process.env, QAPT_MODEL_URL: `http://127.0.0.1:${stubPort}` },
    stdio: "ignore",
  });
  const base = `http://127.0.0.1:${servicePort}`;
  await waitForHealth(base);
  client = new Client(base);
});

afterAll(async () => {
  serviceProcess?.kill();
  await new Promise<void>((resolve) => stubServer.close(() => resolve()));
});

describe("question to answer", () => {
  it("translates the worked example verbatim and answers with a number", async () => {
    const session = new Session(client);
    const entry = await session.submitQuestion(KNOWN_QUESTION);
    expect(entry?.program).toBe(KNOWN_PROGRAM);
    expect(entry?.answer.kind).toBe("number");
    expect(Number.isFinite(entry?.answer.value)).toBe(true);
    const badge = answerBadge(entry!.program, entry!.answer);
    expect(badge.endsWith("m³/s")).toBe(true);
    expect(session.history).toHaveLength(1);
  });

  it("gives the same rendered answer when asked twice", async () => {
    const first = await client.qa(KNOWN_QUESTION);
    const second = await client.qa(KNOWN_QUESTION);
    expect(second.answer).toEqual(first.answer);
    expect(second.program).toBe(first.program);
  });

  it("answers a collapse question with a boolean badge", async () => {
    const result = await client.qa("If Fwn is 45113 and M_ek is 2.7e7, does the AMOC collapse?");
    expect(result.program.startsWith("ChangeSign(")).toBe(true);
    expect(result.answer.kind).toBe("bool");
    expect(answerBadge(result.program, result.answer)).toBe("NO-COLLAPSE");
  });

  it("serves a down-sampled series that still spans the whole run", async () => {
    const result = await client.qa(KNOWN_QUESTION);
    expect(result.series.steps.length).toBeLessThanOrEqual(2000);
    expect(result.series.steps[0]).toBe(0);
    expect(result.series.steps.at(-1)).toBe(4000);
    expect(result.series.M_n.length).toBe(result.series.steps.length);
  });

  it("rejects an unrecognized question and offers the form registry", async () => {
    let caught: unknown;
    try {
      await client.qa("Is the moon made of cheese?");
    } catch (error) {
      caught = error;
    }
    expect(caught).toBeInstanceOf(ApiError);
    expect((caught as ApiError).status).toBe(422);
    const registry = await client.forms();
    const suggestions = formSuggestions(registry);
    expect(suggestions).toHaveLength(10);
    expect(suggestions[0]).toContain("What is the value of M_n");
  });
});

describe("program editing", () => {
  it("reports parse errors at the server-reported position", async () => {
    const session = new Session(client);
    const truncated = "FinalValue(four_box_model(";
    let caught: unknown;
    try {
      await session.runProgram(truncated);
    } catch (error) {
      caught = error;
    }
    const detail = parseErrorDetail(caught);
    expect(detail).not.toBeNull();
    expect(typeof detail?.position).toBe("number");
    const position = detail!.position!;
    expect(position).toBeGreaterThanOrEqual(0);
    expect(position).toBeLessThanOrEqual(truncated.length);
    const pointer = parseErrorPointer(truncated, position);
    const caretLine = pointer.split("\n")[1]!;
    expect(caretLine.indexOf("^")).toBe(position);
    expect(session.history).toHaveLength(0);
  });

  it("runs a hand-edited program", async () => {
    const session = new Session(client);
    const entry = await session.runProgram("FinalValue(four_box_model(SetTo(N,2000)),M_n)");
    expect(entry?.question).toBeNull();
    expect(entry?.params.N).toBe(2000);
    expect(entry?.series.steps.at(-1)).toBe(2000);
  });
});

describe("engine toggle", () => {
  it("re-translates the last question through the stub adapter and diffs", async () => {
    const session = new Session(client);
    await session.submitQuestion(KNOWN_QUESTION);
    const before = stubRequests;
    const diff = await session.toggleEngine();
    expect(stubRequests).toBeGreaterThan(before);
    expect(session.engine).toBe("model");
    expect(diff?.changed).toBe(true);
    expect(diff?.before).toBe(KNOWN_PROGRAM);
    expect(diff?.after).toBe("FinalValue(four_box_model(SetTo(Fwn,4000),SetTo(N,5000)),M_n)");
    expect(diff?.source).toBe("model");

    const back = await session.toggleEngine();
    expect(session.engine).toBe("reference");
    expect(back?.changed).toBe(false);
    expect(back?.after).toBe(KNOWN_PROGRAM);
  });
});

describe("comparing runs", () => {
  it("overlays a stable and a collapsing run with a parameter legend", async () => {
    const session = new Session(client);
    await session.submitQuestion(KNOWN_QUESTION);
    await session.submitQuestion("What is the value of M_n at time step 4000 if Fwn is 300000?");
    const pair = session.comparable();
    expect(pair).not.toBeNull();
    const [stable, collapsing] = pair!;
    expect(crossesZero(stable.series.M_n)).toBe(false);
    expect(crossesZero(collapsing.series.M_n)).toBe(true);
    expect(paramDiffLegend(stable.params, collapsing.params)).toBe("Fwn: 5000 -> 300000");

    const view = overlay(
      [
        { series: stable.series, params: stable.params },
        { series: collapsing.series, params: collapsing.params },
      ],
      640,
      240,
    );
    expect(view.paths).toHaveLength(2);
    expect(view.zeroY).toBeGreaterThan(0);
    expect(view.zeroY).toBeLessThan(240);
  });
});
