/** Wire types mirroring the session service's JSON responses. */

export type ColumnKind = 'categorical' | 'quantitative';
export type SetDesignation = 'single' | 'conjunction' | 'repeat';
export type ViewMode = 'small_multiples' | 'small_permutables';

export interface ColumnInfo {
  name: string;
  kind: ColumnKind;
}

export interface SetSpec {
  columns: string[];
  designation: SetDesignation;
}

export interface Violation {
  code: string;
  message: string;
  set_index?: number;
}

export interface ValidateResponse {
  ok: boolean;
  violations: Violation[];
  columns: ColumnInfo[];
  row_keys: string[];
}

export interface ChannelBinding {
  column: string;
  channel: string;
  color: number | null;
}

export interface MarkSpec {
  set_index: number;
  shape: string;
  repeat: boolean;
  channels: ChannelBinding[];
}

export interface DesignSpec {
  id: string;
  marks: MarkSpec[];
  scaffold: string;
  gravity: string;
  seed: number;
  revision: number;
}

export interface PaletteShape {
  id: string;
  class: 'polygon' | 'wave';
  symmetric: boolean;
}

export interface PaletteChannel {
  id: string;
  value_kind: ColumnKind;
  applies_to: 'polygon' | 'wave' | 'both';
  range?: [number, number];
}

export interface PaletteDoc {
  shapes: PaletteShape[];
  channels: PaletteChannel[];
  scaffolds: { id: string; class: string }[];
  gravities: { id: string; pull: number }[];
  colors: string[];
}

export interface SessionState {
  id: string;
  key: string;
  designation: { sets: SetSpec[] };
  palette: PaletteDoc;
  designs: DesignSpec[];
  mode: ViewMode;
  page_index: number;
  selection: [string, string] | null;
  overrides: Record<string, { position?: [number, number]; size?: number }>;
  columns: ColumnInfo[];
  row_keys: string[];
  renderable_row_keys: string[];
  page_count: number;
}

export interface LegendEntry {
  shape: string;
  columns: string[];
  channels: string[];
  values: string[];
  color: string;
}

export interface LegendModel {
  row_key: string;
  entries: LegendEntry[];
}

export interface OverrideRequest {
  set_index: number;
  new_shape?: string;
  column?: string;
  new_channel?: string;
}
