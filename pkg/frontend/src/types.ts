export interface Candidate {
  id: number;
  doc_id: string;
  text: string;
  score: number;
  label: number;
  label_name: string;
  probabilities: number[];
}

export interface Timings {
  embed_ms: number;
  retrieve_ms: number;
  classify_ms: number;
}

export interface DetectionReport {
  query_text: string;
  candidates: Candidate[];
  timings: Timings;
}

export interface CorpusSegment {
  id: number;
  doc_id: string;
  text: string;
}

export interface IngestResponse {
  count: number;
}

export const LABEL_TITLES: Record<string, string> = {
  no_plagiarism: "No Plagiarism",
  imitation_plagiarism: "Imitation Plagiarism",
  shuffle_plagiarism: "Shuffle Plagiarism",
};
