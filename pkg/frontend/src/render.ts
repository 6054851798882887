/**
 * Pure view rendering: data in, HTML strings out.
 *
 * These functions never compute a game fact. The two parsing helpers below
 * only reshape service-rendered text for layout (splitting a lex point into
 * its block and rational halves, approximating a rational for pixel
 * placement) and none of their output feeds back into any decision.
 */

import { PhaseWire, StateWire } from "./api.js";
import {
  Banner,
  CertificateEntry,
  Feedback,
  HistoryEntry,
  PreviewResult,
  SessionView,
} from "./state.js";

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Presentation-only: "(w*2+1,-1/3)" -> block "w*2+1", rational "-1/3". */
export function splitLexText(text: string): { block: string; rational: string } | null {
  if (!text.startsWith("(") || !text.endsWith(")")) return null;
  const inner = text.slice(1, -1);
  const comma = inner.indexOf(",");
  if (comma < 0) return null;
  return { block: inner.slice(0, comma), rational: inner.slice(comma + 1) };
}

/** Presentation-only float approximation of "p/q" text for marker placement. */
export function fractionValue(text: string): number | null {
  const m = /^(-?\d+)(?:\/(\d+))?$/.exec(text.trim());
  if (!m || m[1] === undefined) return null;
  const num = Number(m[1]);
  const den = m[2] === undefined ? 1 : Number(m[2]);
  if (!Number.isFinite(num) || !Number.isFinite(den) || den === 0) return null;
  return num / den;
}

function boundLabel(text: string | null): string {
  return text === null ? "unbounded" : escapeHtml(text);
}

export function renderBlockRibbon(
  lowerText: string | null,
  upperText: string | null,
): string {
  const lo = lowerText === null ? null : splitLexText(lowerText);
  const hi = upperText === null ? null : splitLexText(upperText);
  if (!lo && !hi) return "";
  const left = lo ? escapeHtml(lo.block) : "?";
  const right = hi ? escapeHtml(hi.block) : "?";
  if (lo && hi && lo.block === hi.block) {
    return `<div class="ribbon">inside block <b>${left}</b></div>`;
  }
  return `<div class="ribbon">from block <b>${left}</b> up to block <b>${right}</b></div>`;
}

export function renderNumberLine(
  lowerText: string | null,
  upperText: string | null,
): string {
  // the line always spans exactly the current window, so each stage zooms in
  const lo = lowerText === null ? null : splitLexText(lowerText)?.rational ?? lowerText;
  const hi = upperText === null ? null : splitLexText(upperText)?.rational ?? upperText;
  const left = lo === null ? "&minus;&infin;" : escapeHtml(lo);
  const right = hi === null ? "&infin;" : escapeHtml(hi);
  let widthNote = "";
  if (lo !== null && hi !== null) {
    const a = fractionValue(lo);
    const b = fractionValue(hi);
    if (a !== null && b !== null && b > a) {
      widthNote = `<span class="width">window &approx; ${(b - a).toPrecision(3)}</span>`;
    }
  }
  return (
    `<div class="numberline">` +
    `<span class="endpoint lower">${left}</span>` +
    `<span class="track"></span>` +
    `<span class="endpoint upper">${right}</span>` +
    widthNote +
    `</div>`
  );
}

export function renderInterval(state: StateWire | null): string {
  if (!state) return `<p class="idle">no session</p>`;
  const { lower_text, upper_text } = state.interval;
  // invariant: the endpoint labels below are exactly the service's texts
  return (
    renderBlockRibbon(lower_text, upper_text) +
    renderNumberLine(lower_text, upper_text) +
    `<p class="bounds">interval (<code>${boundLabel(lower_text)}</code>, ` +
    `<code>${boundLabel(upper_text)}</code>), stage ${state.stage}</p>`
  );
}

export function renderPhase(phase: PhaseWire): string {
  if (phase.kind === "sigma") {
    return `next piece ${phase.next_piece}`;
  }
  if (phase.phase === "delegating") {
    return (
      `delegating to block <b>${escapeHtml(phase.block)}</b>` +
      ` &rsaquo; ${renderPhase(phase.inner)}`
    );
  }
  if (phase.phase === "won") {
    return `won outright at bound ${escapeHtml(phase.bound)}`;
  }
  return `searching, bound ${escapeHtml(phase.bound)}`;
}

export function renderCertificates(entries: CertificateEntry[]): string {
  if (entries.length === 0) return `<p class="idle">no certificates yet</p>`;
  const items = entries
    .map((c) => `<li data-stage="${c.stage}">${escapeHtml(c.text)}</li>`)
    .join("");
  return `<ol class="certs">${items}</ol>`;
}

export function renderHistory(entries: HistoryEntry[]): string {
  if (entries.length === 0) return `<p class="idle">no moves yet</p>`;
  const items = entries
    .map(
      (m) =>
        `<li class="move-${m.player}">stage ${m.stage}, ` +
        `${m.player}: <code>${escapeHtml(m.text)}</code></li>`,
    )
    .join("");
  return `<ol class="history">${items}</ol>`;
}

export function renderFeedback(feedback: Feedback): string {
  if (feedback.kind === "none") return "";
  if (feedback.kind === "prompt") {
    return `<p class="prompt">${escapeHtml(feedback.message)}</p>`;
  }
  const bounds = feedback.violated
    .map(
      (v) =>
        `<span class="violation" data-side="${v.side}">` +
        `${v.side} bound <code>${escapeHtml(v.bound_text)}</code></span>`,
    )
    .join(" ");
  return (
    `<div class="illegal"><p>${escapeHtml(feedback.message)}</p>` +
    `${bounds}<p class="hint">your input is kept above; edit and retry</p></div>`
  );
}

export function renderPreview(preview: PreviewResult | null): string {
  if (!preview) return "";
  if (!preview.legal) {
    const bounds = preview.violated
      .map((v) => `${v.side} bound <code>${escapeHtml(v.bound_text)}</code>`)
      .join(", ");
    return (
      `<div class="preview illegal-preview">if you play ` +
      `<code>${escapeHtml(preview.input)}</code>: illegal (${bounds})</div>`
    );
  }
  const certs = preview.certificates.map((c) => escapeHtml(c.text)).join("; ");
  return (
    `<div class="preview">if you play <code>${escapeHtml(preview.input)}</code>, ` +
    `the reply is <code>${escapeHtml(preview.replyText ?? "")}</code>` +
    (certs ? ` with: ${certs}` : "") +
    `</div>`
  );
}

export function renderBanner(banner: Banner): string {
  if (!banner) return "";
  if (banner.kind === "unreachable") {
    return (
      `<div class="banner error">service unreachable: ` +
      `${escapeHtml(banner.message)} <button data-action="retry">retry</button></div>`
    );
  }
  return `<div class="banner inline-error">${escapeHtml(banner.message)}</div>`;
}

export function renderEndScreen(view: SessionView): string {
  if (!view.finished || !view.state) return "";
  return (
    `<div class="endscreen"><p>horizon ${view.state.horizon} reached after ` +
    `${view.state.moves} moves.</p>` +
    `<button data-action="download">download transcript</button></div>`
  );
}
