/** Flat key -> string UI localization, loaded at runtime. */

export class LocalizationError extends Error {}

export class Localizer {
  private warned = new Set<string>();

  constructor(private strings: Record<string, string>) {}

  /** Translate a key; unknown keys show up as [key] and warn once. */
  t(key: string): string {
    const value = this.strings[key];
    if (value === undefined) {
      if (!this.warned.has(key)) {
        console.warn(`missing UI string: ${key}`);
        this.warned.add(key);
      }
      return `[${key}]`;
    }
    return value;
  }

  static parse(raw: string): Localizer {
    let data: unknown;
    try {
      data = JSON.parse(raw);
    } catch {
      throw new LocalizationError("strings file is not valid JSON");
    }
    if (data === null || typeof data !== "object" || Array.isArray(data)) {
      throw new LocalizationError("strings file must be a JSON object");
    }
    for (const [key, value] of Object.entries(data)) {
      if (typeof value !== "string") {
        throw new LocalizationError(`string for ${key} is not a string`);
      }
    }
    return new Localizer(data as Record<string, string>);
  }

  static async load(url: string, fetchFn = fetch): Promise<Localizer> {
    const resp = await fetchFn(url);
    if (!resp.ok) throw new LocalizationError(`cannot load strings from ${url}`);
    return Localizer.parse(await resp.text());
  }
}
