/**
 * User settings (candidate count, distance mode, service URL), persisted in
 * browser storage and applied to every subsequent request.
 */

export interface Settings {
  k: number;
  mode: "asym" | "sym";
  serviceUrl: string;
}

export const DEFAULT_SETTINGS: Settings = {
  k: 20,
  mode: "asym",
  serviceUrl: "http://127.0.0.1:8000",
};

const STORAGE_KEY = "pqdtw-sketch-settings";

export function validateServiceUrl(url: string): string | null {
  try {
    const parsed = new URL(url);
    if (parsed.protocol !== "http:" && parsed.protocol !== "https:") {
      return "service URL must use http or https";
    }
    return null;
  } catch {
    return "not a valid URL";
  }
}

export function loadSettings(storage: Storage = localStorage): Settings {
  try {
    const raw = storage.getItem(STORAGE_KEY);
    if (!raw) return { ...DEFAULT_SETTINGS };
    const parsed = JSON.parse(raw) as Partial<Settings>;
    const settings = { ...DEFAULT_SETTINGS, ...parsed };
    if (!Number.isInteger(settings.k) || settings.k < 1) settings.k = DEFAULT_SETTINGS.k;
    if (settings.mode !== "asym" && settings.mode !== "sym") {
      settings.mode = DEFAULT_SETTINGS.mode;
    }
    if (validateServiceUrl(settings.serviceUrl) !== null) {
      settings.serviceUrl = DEFAULT_SETTINGS.serviceUrl;
    }
    return settings;
  } catch {
    return { ...DEFAULT_SETTINGS };
  }
}

export function saveSettings(settings: Settings, storage: Storage = localStorage): void {
  storage.setItem(STORAGE_KEY, JSON.stringify(settings));
}
