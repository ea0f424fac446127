/** Browser entry point: wire the page to a running test service.
 *
 * Query parameters: server (service base URL, default same origin),
 * test (test id, default the first one listed), strings (UI strings
 * JSON, default ./strings/en.json), native (participant language code),
 * real_key / fake_key (keyboard overrides).
 */

import { ApiClient } from "./api.js";
import { browserClock } from "./clock.js";
import { Localizer } from "./localize.js";
import { DEFAULT_CONFIG, TrialRunner } from "./runner.js";
import { DomView } from "./view.js";

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const server = params.get("server") ?? window.location.origin;
  const stringsUrl = params.get("strings") ?? "./strings/en.json";

  const t = await Localizer.load(stringsUrl);
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const view = new DomView(root, t);

  const api = new ApiClient(server);
  let testId = params.get("test");
  if (!testId) {
    const tests = await api.listTests();
    if (tests.length === 0) {
      view.showError(t.t("no_tests"));
      return;
    }
    testId = tests[0]!.test_id;
  }

  const keymap = {
    realKey: params.get("real_key") ?? DEFAULT_CONFIG.keymap.realKey,
    fakeKey: params.get("fake_key") ?? DEFAULT_CONFIG.keymap.fakeKey,
  };
  const runner = new TrialRunner(api, view, browserClock, { keymap });
  const native = params.get("native") ?? undefined;
  await runner.run(testId, native ? { nativeLang: native } : {});
}

boot().catch((err) => {
  console.error(err);
  const root = document.getElementById("app");
  if (root && root.childElementCount === 0) {
    root.textContent = String(err);
  }
});
