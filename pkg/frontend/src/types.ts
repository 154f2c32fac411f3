/** Wire types for the inference service. */

export interface CommentResponse {
  comments: Record<string, string>;
  errors: Record<string, string>;
  win_rate_before: number;
  win_rate_after: number;
  best_alternative: string;
  alternative_degenerate: boolean;
  rollout: string[];
  model_id: string;
}

export interface CommentRequest {
  fen: string;
  move: string;
  categories?: string[];
  horizon?: number;
}

export interface LegalResponse {
  moves: string[];
}

export interface HealthResponse {
  status: string;
  model_id: string;
}

export const ALL_CATEGORIES = [
  "description",
  "quality",
  "comparison",
  "planning",
  "contexts",
] as const;

export type Category = (typeof ALL_CATEGORIES)[number];
