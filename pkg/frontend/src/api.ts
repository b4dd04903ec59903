/** Typed client for the meeting service; the UI's only I/O path. */

import type {
  AnswerDoc,
  EditOp,
  MeetingDoc,
  MeetingListEntry,
  SuggestionDoc,
  ValidationReport,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly offset?: number,
    readonly report?: ValidationReport,
  ) {
    super(message);
  }
}

/** The service could not be reached at all. */
export class OfflineError extends Error {
  constructor(cause: unknown) {
    super(`service unreachable: ${String(cause)}`);
  }
}

export interface MeetingRevision {
  meeting: MeetingDoc;
  etag: string;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(
    path: string,
    init: RequestInit = {},
    etag?: string,
  ): Promise<Response> {
    const headers = new Headers(init.headers);
    if (etag !== undefined) headers.set("If-Match", etag);
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, { ...init, headers });
    } catch (cause) {
      throw new OfflineError(cause);
    }
    if (response.ok) return response;
    let code = "ERROR";
    let message = `${response.status}`;
    let offset: number | undefined;
    let report: ValidationReport | undefined;
    try {
      const body = (await response.json()) as {
        error?: { code?: string; message?: string; offset?: number; report?: ValidationReport };
      };
      code = body.error?.code ?? code;
      message = body.error?.message ?? message;
      offset = body.error?.offset;
      report = body.error?.report;
    } catch {
      // Non-JSON error body; keep the status text.
    }
    throw new ApiError(response.status, code, message, offset, report);
  }

  private async json<T>(path: string, init: RequestInit = {}, etag?: string): Promise<T> {
    const response = await this.request(path, init, etag);
    return (await response.json()) as T;
  }

  private post(path: string, body: unknown, etag?: string): Promise<Response> {
    return this.request(
      path,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      },
      etag,
    );
  }

  listMeetings(): Promise<MeetingListEntry[]> {
    return this.json("/meetings");
  }

  async getMeeting(id: string): Promise<MeetingRevision> {
    const response = await this.request(`/meetings/${id}`);
    return {
      meeting: (await response.json()) as MeetingDoc,
      etag: response.headers.get("ETag") ?? "",
    };
  }

  async putMeeting(meeting: MeetingDoc, etag?: string): Promise<MeetingRevision> {
    const response = await this.request(
      `/meetings/${meeting.id}`,
      {
        method: "PUT",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(meeting),
      },
      etag,
    );
    return {
      meeting: (await response.json()) as MeetingDoc,
      etag: response.headers.get("ETag") ?? "",
    };
  }

  async postEdits(meetingId: string, edits: EditOp[], etag?: string): Promise<MeetingRevision> {
    const response = await this.post(`/meetings/${meetingId}/edits`, { edits }, etag);
    return {
      meeting: (await response.json()) as MeetingDoc,
      etag: response.headers.get("ETag") ?? "",
    };
  }

  validate(meetingId: string): Promise<ValidationReport> {
    return this.json(`/meetings/${meetingId}/validate`, { method: "POST" });
  }

  suggestions(meetingId: string): Promise<SuggestionDoc[]> {
    return this.json(`/meetings/${meetingId}/suggestions`);
  }

  query(text: string): Promise<AnswerDoc> {
    return this.json("/query", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ query: text }),
    });
  }

  async getGrammar(): Promise<string> {
    const response = await this.request("/grammar");
    return await response.text();
  }
}
