/** DOM wiring for the annotation workbench. */

import { ApiClient, ApiError, OfflineError } from "./api.js";
import { licensedChildren, parseGrammar, renderPattern } from "./grammar.js";
import { contextChain, episodeById } from "./meeting.js";
import {
  escapeHtml,
  highlightedTurns,
  renderAnswer,
  renderContextChain,
  renderEpisodeTree,
  renderParseError,
  renderReport,
  renderSuggestions,
  renderTurnList,
} from "./render.js";
import {
  acceptSuggestion,
  attemptInsert,
  attemptReplyLink,
  dismissSuggestion,
  initialState,
  selectEpisode,
  selectTurn,
  submitPending,
  withMeeting,
  type ViewState,
} from "./state.js";

const api = new ApiClient("");
let state: ViewState = initialState();
let linkSource: string | null = null;

function pane(id: string): HTMLElement {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing pane #${id}`);
  return element;
}

function banner(): string {
  if (state.offline) return `<p class="banner offline">service unreachable; showing cached view</p>`;
  if (state.conflict) {
    return `<p class="banner conflict">meeting changed on the server
      <button type="button" id="reload-meeting">reload</button></p>`;
  }
  if (state.blocked !== null) {
    return `<p class="banner blocked">${escapeHtml(state.blocked.code)}:
      ${escapeHtml(state.blocked.message)}</p>`;
  }
  if (linkSource !== null) {
    return `<p class="banner linking">reply from ${escapeHtml(linkSource)}: pick an earlier episode</p>`;
  }
  return "";
}

function renderLabelPicker(): string {
  if (state.meeting === null || state.grammar === null || state.selectedEpisode === null) {
    return `<option value="">(select an episode first)</option>`;
  }
  const parent = episodeById(state.meeting, state.selectedEpisode);
  const options = licensedChildren(state.grammar, parent.category, parent.parameter).map(
    (pattern) => {
      const text = renderPattern(pattern);
      return `<option value="${escapeHtml(text)}">${escapeHtml(text)}</option>`;
    },
  );
  return options.join("") || `<option value="">(no licensed children)</option>`;
}

function redraw(): void {
  pane("banner").innerHTML = banner();
  if (state.meeting === null) {
    pane("turns").innerHTML = `<p class="empty">no meeting loaded</p>`;
    pane("tree").innerHTML = "";
    pane("chain").innerHTML = "";
    return;
  }
  const highlighted = highlightedTurns(state.meeting, state.selectedEpisode);
  pane("turns").innerHTML = renderTurnList(state.meeting, highlighted, state.selectedTurn);
  pane("tree").innerHTML = renderEpisodeTree(state.meeting, state.selectedEpisode);
  pane("chain").innerHTML =
    state.selectedEpisode === null
      ? `<p class="empty">select an episode</p>`
      : renderContextChain(state.meeting, contextChain(state.meeting, state.selectedEpisode));
  pane("report").innerHTML = state.report === null ? "" : renderReport(state.report);
  pane("suggestions").innerHTML = renderSuggestions(state.meeting, state.suggestions);
  pane("label-picker").innerHTML = renderLabelPicker();
  pane("pending-count").textContent = String(state.pendingEdits.length);
}

async function refreshReport(): Promise<void> {
  if (state.meeting === null) return;
  state = { ...state, report: await api.validate(state.meeting.id) };
}

async function loadMeeting(id: string): Promise<void> {
  const revision = await api.getMeeting(id);
  state = withMeeting(state, revision.meeting, revision.etag);
  state = { ...state, suggestions: await api.suggestions(id) };
  await refreshReport();
  redraw();
}

function jumpToTurn(turnId: string): void {
  state = selectTurn(state, turnId);
  redraw();
  document.getElementById(`turn-${turnId}`)?.scrollIntoView({ block: "center" });
}

function onEpisodeClick(episodeId: string): void {
  if (linkSource === null) {
    state = selectEpisode(state, episodeId);
    redraw();
    return;
  }
  if (linkSource !== episodeId) {
    state = attemptReplyLink(state, linkSource, episodeId);
  }
  linkSource = null;
  redraw();
}

async function submit(): Promise<void> {
  state = await submitPending(api, state);
  if (!state.conflict) await refreshReport();
  redraw();
}

async function runQuery(text: string): Promise<void> {
  const output = pane("console-output");
  try {
    const answer = await api.query(text);
    state = { ...state, answer };
    output.innerHTML = renderAnswer(state.meeting, answer);
  } catch (error) {
    if (error instanceof ApiError && error.code === "PARSE_ERROR") {
      output.innerHTML = renderParseError(text, error.message, error.offset ?? 0);
    } else if (error instanceof ApiError) {
      output.innerHTML = `<p class="query-error">${escapeHtml(error.message)}</p>`;
    } else {
      throw error;
    }
  }
}

function wireEvents(): void {
  document.body.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const jump = target.closest<HTMLElement>("[data-jump-turn]");
    if (jump?.dataset.jumpTurn) {
      event.preventDefault();
      jumpToTurn(jump.dataset.jumpTurn);
      return;
    }
    const accept = target.closest<HTMLElement>("[data-accept-suggestion]");
    if (accept?.dataset.acceptSuggestion !== undefined) {
      state = acceptSuggestion(state, Number(accept.dataset.acceptSuggestion));
      void submit();
      return;
    }
    const dismiss = target.closest<HTMLElement>("[data-dismiss-suggestion]");
    if (dismiss?.dataset.dismissSuggestion !== undefined) {
      state = dismissSuggestion(state, Number(dismiss.dataset.dismissSuggestion));
      redraw();
      return;
    }
    if (target.id === "reload-meeting" && state.meeting !== null) {
      void loadMeeting(state.meeting.id);
      return;
    }
    const episode = target.closest<HTMLElement>("[data-episode]");
    if (episode?.dataset.episode && pane("tree").contains(episode)) {
      onEpisodeClick(episode.dataset.episode);
      return;
    }
    if (episode?.dataset.episode) {
      state = selectEpisode(state, episode.dataset.episode);
      redraw();
      return;
    }
    const turn = target.closest<HTMLElement>("[data-turn]");
    if (turn?.dataset.turn) {
      state = selectTurn(state, turn.dataset.turn);
      redraw();
    }
  });

  pane("link-mode").addEventListener("click", () => {
    linkSource = state.selectedEpisode;
    redraw();
  });

  pane("submit-edits").addEventListener("click", () => {
    void submit();
  });

  (pane("insert-form") as HTMLFormElement).addEventListener("submit", (event) => {
    event.preventDefault();
    if (state.selectedEpisode === null) return;
    const picker = pane("label-picker") as HTMLSelectElement;
    if (picker.value === "") return;
    const match = /^([A-Z_]+)(?:\(([a-z_*]+)\))?$/.exec(picker.value);
    if (!match) return;
    const parameter = match[2] === undefined || match[2] === "*" ? null : match[2];
    const from = (pane("span-from") as HTMLInputElement).value.trim();
    const to = (pane("span-to") as HTMLInputElement).value.trim();
    const span: [string, string] | null = from !== "" && to !== "" ? [from, to] : null;
    state = attemptInsert(state, state.selectedEpisode, match[1], parameter, span);
    redraw();
  });

  (pane("query-form") as HTMLFormElement).addEventListener("submit", (event) => {
    event.preventDefault();
    const input = pane("query-input") as HTMLInputElement;
    if (input.value.trim() !== "") void runQuery(input.value);
  });
}

async function boot(): Promise<void> {
  wireEvents();
  try {
    state = { ...state, grammar: parseGrammar(await api.getGrammar()) };
    const meetings = await api.listMeetings();
    if (meetings.length > 0) await loadMeeting(meetings[0].id);
    else redraw();
  } catch (error) {
    if (error instanceof OfflineError) {
      state = { ...state, offline: true };
      redraw();
      return;
    }
    throw error;
  }
}

void boot();
