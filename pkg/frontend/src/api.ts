import type { AnnotationSubmission, NextTaskResponse, StoredRecord } from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number | null = null,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin client over the annotation service; the server is the source of truth. */
export class ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async nextTask(batchId: string, annotatorId: string): Promise<NextTaskResponse> {
    let response: Response;
    try {
      response = await this.fetchFn(
        this.url(
          `/batches/${encodeURIComponent(batchId)}/next?annotator=${encodeURIComponent(annotatorId)}`,
        ),
      );
    } catch (err) {
      throw new ApiError(`service unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      throw new ApiError(`next-task request failed (${response.status})`, response.status);
    }
    return (await response.json()) as NextTaskResponse;
  }

  async submit(record: AnnotationSubmission): Promise<StoredRecord> {
    let response: Response;
    try {
      response = await this.fetchFn(this.url("/annotations"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(record),
      });
    } catch (err) {
      throw new ApiError(`service unreachable: ${String(err)}`);
    }
    if (response.status !== 201) {
      let detail = `submit failed (${response.status})`;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // keep the generic message
      }
      throw new ApiError(detail, response.status);
    }
    const body = (await response.json()) as { stored: StoredRecord };
    return body.stored;
  }
}
