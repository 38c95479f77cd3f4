/** JSON shapes exchanged with the gourds HTTP service. */

export interface Cell {
  q: number;
  r: number;
}

export type MoveKind = "slide" | "turn" | "pivot" | "sharp";

export interface Move {
  tail: Cell;
  head: Cell;
  target: Cell;
  kind: MoveKind;
}

export interface GourdJson {
  a: Cell;
  b: Cell;
  label_a: string;
  label_b: string;
}

export interface ConfigJson {
  gourds: GourdJson[];
  empty: Cell;
}

export interface BoardCell extends Cell {
  label: string;
}

export interface BoardJson {
  cells: BoardCell[];
}

export type TargetJson = { config: ConfigJson } | { board: BoardJson } | null;

export interface SessionState {
  id: string;
  proper: boolean;
  mode: string;
  board: BoardJson;
  current: ConfigJson;
  target: TargetJson;
  history: Move[];
  solved: boolean | null;
}

export interface HintReply {
  move: Move | null;
  remaining: number;
}

export interface PlanJson {
  strategy: string;
  stats: Record<string, number>;
  s1: Move[];
  s2: Move[];
  s3: Move[];
}

export function cellKey(c: Cell): string {
  return `${c.q},${c.r}`;
}

export function sameCell(a: Cell, b: Cell): boolean {
  return a.q === b.q && a.r === b.r;
}

export function sameMove(a: Move, b: Move): boolean {
  return (
    sameCell(a.tail, b.tail) &&
    sameCell(a.head, b.head) &&
    sameCell(a.target, b.target) &&
    a.kind === b.kind
  );
}
