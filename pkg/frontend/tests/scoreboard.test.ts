/** Parity: the scoreboard must show exactly the numbers `eval-ruleset`
 * prints for the same project, field for field, on train and validation. */

import { describe, expect, it } from "vitest";

import { renderScoreboard, scoreboardModel } from "../src/panels/scoreboard.js";
import type { Report, ReportResponse } from "../src/types.js";
import { fixture } from "./helpers.js";

function checkParity(apiFile: string, cliFile: string) {
  const served = fixture<ReportResponse>(apiFile).report;
  const cli = fixture<Report>(cliFile);

  expect(served.part).toBe(cli.part);
  expect(served.per_class).toEqual(cli.per_class);
  expect(served.overall).toEqual(cli.overall);
  expect(served.overall_w).toEqual(cli.overall_w);
  expect(served.support).toEqual(cli.support);
  expect(served.excluded_classes).toEqual(cli.excluded_classes);

  const model = scoreboardModel(served);
  for (const [name, ev] of Object.entries(cli.per_class)) {
    const row = model.rows.find((r) => r.label === name);
    expect(row, `row for ${name}`).toBeDefined();
    expect(row!.precision).toBe(ev.precision);
    expect(row!.recall).toBe(ev.recall);
    expect(row!.f1).toBe(ev.f1);
    expect(row!.support).toBe(cli.support[name]);
  }
  const overall = model.rows.find((r) => r.label === "overall")!;
  expect([overall.precision, overall.recall, overall.f1]).toEqual([
    cli.overall.precision,
    cli.overall.recall,
    cli.overall.f1,
  ]);
  const weighted = model.rows.find((r) => r.label === "overall-w")!;
  expect([weighted.precision, weighted.recall, weighted.f1]).toEqual([
    cli.overall_w.precision,
    cli.overall_w.recall,
    cli.overall_w.f1,
  ]);
}

describe("scoreboard / CLI parity", () => {
  it("train scores equal eval-ruleset --part train --json", () => {
    checkParity("report_train.json", "cli_report_train.json");
  });

  it("validation scores equal eval-ruleset --part validation --json", () => {
    checkParity("report_validation.json", "cli_report_validation.json");
  });

  it("renders the served numbers to three decimals", () => {
    const served = fixture<ReportResponse>("report_train.json").report;
    const html = renderScoreboard(scoreboardModel(served));
    for (const ev of Object.values(served.per_class)) {
      expect(html).toContain(`<td>${ev.f1.toFixed(3)}</td>`);
    }
    expect(html).toContain("overall-w");
  });

  it("lists rule-less classes as excluded", () => {
    const served = fixture<ReportResponse>("report_train.json").report;
    const html = renderScoreboard(scoreboardModel(served));
    for (const name of served.excluded_classes) {
      expect(html).toContain(name);
    }
  });
});
