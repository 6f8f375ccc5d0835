/** Connective palette: buttons insert ASCII tokens at the caret. The
 * display layer pretty-prints to unicode; the wire format stays ASCII. */

export const PALETTE: { label: string; token: string }[] = [
  { label: "¬", token: "!" },
  { label: "∧", token: " & " },
  { label: "∨", token: " | " },
  { label: "⊕", token: " xor " },
  { label: "→", token: " -> " },
  { label: "↔", token: " <-> " },
  { label: "( )", token: "()" },
];

export interface Insertion {
  text: string;
  cursor: number;
}

/** Insert a palette token over the selection [start, end). For the "( )"
 * token, the caret lands between the parentheses. */
export function insertToken(text: string, start: number, end: number, token: string): Insertion {
  const next = text.slice(0, start) + token + text.slice(end);
  const cursor = token === "()" ? start + 1 : start + token.length;
  return { text: next, cursor };
}
