/**
 * Session view model.
 *
 * The controller is the only writer of the view, and it only ever writes
 * facts taken from service responses. Every such write is announced through
 * the judgment hook with the originating response attached, which is how the
 * tests audit that no game rule lives on this side of the wire.
 */

import {
  ApiError,
  CertificateWire,
  CreateRequest,
  CreateResultWire,
  MoveResultWire,
  StateWire,
  ViolationWire,
} from "./api.js";

/** The slice of the transport the controller uses; ApiClient satisfies it. */
export interface SessionApi {
  createSession(req: CreateRequest): Promise<CreateResultWire>;
  move(id: string, pointText: string): Promise<MoveResultWire>;
  preview(id: string, pointText: string): Promise<MoveResultWire>;
  transcriptText(id: string): Promise<string>;
}

export interface HistoryEntry {
  stage: number;
  player: "I" | "II";
  text: string;
}

export interface CertificateEntry {
  stage: number;
  text: string;
}

export type Feedback =
  | { kind: "none" }
  | { kind: "prompt"; message: string }
  | {
      kind: "illegal";
      message: string;
      violated: ViolationWire[];
      /** the rejected input, kept so the human can edit it */
      keptInput: string;
    };

export type Banner =
  | null
  | { kind: "unreachable"; message: string }
  | { kind: "rejected"; message: string };

export interface PreviewResult {
  input: string;
  legal: boolean;
  replyText: string | null;
  certificates: CertificateEntry[];
  violated: ViolationWire[];
  message: string | null;
}

export interface SessionView {
  orderLabel: string;
  strategyLabel: string;
  sessionId: string | null;
  state: StateWire | null;
  history: HistoryEntry[];
  certificates: CertificateEntry[];
  feedback: Feedback;
  preview: PreviewResult | null;
  banner: Banner;
  finished: boolean;
}

export interface Judgment {
  kind:
    | "session-created"
    | "legal-move"
    | "illegal-move"
    | "preview"
    | "game-over"
    | "transcript";
  /** the service response this judgment was read off of, unmodified */
  source: unknown;
}

export type JudgmentHook = (judgment: Judgment) => void;

function emptyView(): SessionView {
  return {
    orderLabel: "",
    strategyLabel: "",
    sessionId: null,
    state: null,
    history: [],
    certificates: [],
    feedback: { kind: "none" },
    preview: null,
    banner: null,
    finished: false,
  };
}

function certEntries(certs: CertificateWire[] | undefined): CertificateEntry[] {
  return (certs ?? []).map((c) => ({ stage: c.stage, text: c.text }));
}

export class SessionController {
  private readonly viewState: SessionView = emptyView();
  private readonly onJudgment: JudgmentHook;

  /** commits run one after another; this is the tail of the queue */
  private commitChain: Promise<unknown> = Promise.resolve();
  /** monotone ticket for previews so a late response cannot clobber a newer one */
  private previewSeq = 0;
  private previewApplied = 0;
  private lastStart: CreateRequest | null = null;

  constructor(
    private readonly api: SessionApi,
    onJudgment: JudgmentHook = () => {},
  ) {
    this.onJudgment = onJudgment;
  }

  view(): SessionView {
    return this.viewState;
  }

  private adoptState(state: StateWire, source: unknown): void {
    this.viewState.state = state;
    if (state.over && !this.viewState.finished) {
      this.viewState.finished = true;
      this.onJudgment({ kind: "game-over", source });
    }
  }

  async startSession(req: CreateRequest): Promise<boolean> {
    this.lastStart = req;
    const v = this.viewState;
    v.banner = null;
    try {
      const created = await this.api.createSession(req);
      v.orderLabel = req.order;
      v.strategyLabel = req.strategy;
      v.sessionId = created.id;
      v.history = [];
      v.certificates = [];
      v.preview = null;
      v.finished = false;
      v.feedback = { kind: "prompt", message: "opening move, no bounds yet" };
      this.previewSeq = 0;
      this.previewApplied = 0;
      this.onJudgment({ kind: "session-created", source: created });
      this.adoptState(created.state, created);
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.status === 0) {
        v.banner = { kind: "unreachable", message: err.message };
      } else if (err instanceof ApiError) {
        v.banner = { kind: "rejected", message: err.message };
      } else {
        throw err;
      }
      return false;
    }
  }

  /** the banner's retry affordance: re-attempt the last start request */
  async retry(): Promise<boolean> {
    if (!this.lastStart) return false;
    return this.startSession(this.lastStart);
  }

  async submitMove(input: string): Promise<MoveResultWire | null> {
    const run = this.commitChain.then(() => this.commitMove(input));
    this.commitChain = run.catch(() => {});
    return run;
  }

  private async commitMove(input: string): Promise<MoveResultWire | null> {
    const v = this.viewState;
    const id = v.sessionId;
    const before = v.state;
    if (!id || !before || v.finished) return null;
    const stage = before.stage;
    const result = await this.api.move(id, input);
    // a commit changed (or refused to change) the authoritative state, so
    // any preview still in flight answers a question nobody is asking now
    this.previewApplied = this.previewSeq;
    v.preview = null;
    if (result.legal) {
      v.history.push({ stage, player: "I", text: input });
      if (result.reply_text !== undefined) {
        v.history.push({ stage, player: "II", text: result.reply_text });
      }
      v.certificates.push(...certEntries(result.certificates));
      v.feedback = { kind: "none" };
      this.onJudgment({ kind: "legal-move", source: result });
    } else {
      v.feedback = {
        kind: "illegal",
        message: result.message ?? "illegal move",
        violated: result.violated ?? [],
        keptInput: input,
      };
      this.onJudgment({ kind: "illegal-move", source: result });
    }
    this.adoptState(result.state, result);
    return result;
  }

  /**
   * What-if lookup. Responses are applied newest-wins: a slower older
   * preview, or one issued before a commit landed, is dropped on the floor.
   */
  async previewMove(input: string): Promise<MoveResultWire | null> {
    const v = this.viewState;
    const id = v.sessionId;
    const issuedFor = v.state;
    if (!id || !issuedFor || v.finished) return null;
    const ticket = ++this.previewSeq;
    const movesAtIssue = issuedFor.moves;
    const result = await this.api.preview(id, input);
    const stale =
      ticket <= this.previewApplied ||
      v.sessionId !== id ||
      v.state === null ||
      v.state.moves !== movesAtIssue;
    if (stale) return null;
    this.previewApplied = ticket;
    v.preview = {
      input,
      legal: result.legal,
      replyText: result.reply_text ?? null,
      certificates: certEntries(result.certificates),
      violated: result.violated ?? [],
      message: result.message ?? null,
    };
    this.onJudgment({ kind: "preview", source: result });
    return result;
  }

  /** the literal transcript body, exactly as the service sent it */
  async downloadTranscript(): Promise<{ filename: string; text: string }> {
    const id = this.viewState.sessionId;
    if (!id) throw new Error("no active session");
    const text = await this.api.transcriptText(id);
    this.onJudgment({ kind: "transcript", source: text });
    return { filename: `session-${id}.json`, text };
  }
}
