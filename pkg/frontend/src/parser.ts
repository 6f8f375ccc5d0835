/** Client-side formula parser, used ONLY for the live preview next to the
 * input field (pretty-printing and early syntax squiggles). Verdicts always
 * come from the server; this parser never grades anything.
 *
 * Grammar (loosest first): <-> ; -> (right-assoc) ; xor ; | ; & ; ! ; atoms.
 */

export type Ast =
  | { kind: "var"; name: string }
  | { kind: "const"; value: boolean }
  | { kind: "not"; child: Ast }
  | { kind: "and" | "or" | "xor" | "imp" | "iff"; left: Ast; right: Ast };

export type ParseResult =
  | { ok: true; ast: Ast }
  | { ok: false; offset: number; message: string };

interface Token {
  kind: string;
  text: string;
  start: number;
  end: number;
}

const UNICODE_ALIASES: Record<string, string> = {
  "¬": "!",
  "∧": "&",
  "∨": "|",
  "→": "->",
  "↔": "<->",
  "⊕": "xor",
};

function isLetter(ch: string): boolean {
  return /[A-Za-z]/.test(ch);
}

function isWord(ch: string): boolean {
  return /[A-Za-z0-9_]/.test(ch);
}

export function tokenize(text: string): Token[] | { offset: number; message: string } {
  const tokens: Token[] = [];
  let i = 0;
  while (i < text.length) {
    const ch = text[i];
    if (/\s/.test(ch)) {
      i += 1;
      continue;
    }
    const alias = UNICODE_ALIASES[ch];
    if (alias !== undefined) {
      tokens.push({ kind: alias, text: ch, start: i, end: i + 1 });
      i += 1;
      continue;
    }
    if ("!&|()".includes(ch)) {
      tokens.push({ kind: ch, text: ch, start: i, end: i + 1 });
      i += 1;
      continue;
    }
    if (text.startsWith("<->", i)) {
      tokens.push({ kind: "<->", text: "<->", start: i, end: i + 3 });
      i += 3;
      continue;
    }
    if (text.startsWith("->", i)) {
      tokens.push({ kind: "->", text: "->", start: i, end: i + 2 });
      i += 2;
      continue;
    }
    if (isLetter(ch)) {
      let j = i + 1;
      while (j < text.length && isWord(text[j])) j += 1;
      const word = text.slice(i, j);
      const kind = word === "xor" ? "xor" : word === "true" || word === "false" ? "const" : "ident";
      tokens.push({ kind, text: word, start: i, end: j });
      i = j;
      continue;
    }
    return { offset: i, message: `unexpected character '${ch}'` };
  }
  return tokens;
}

class Parser {
  pos = 0;

  constructor(
    private tokens: Token[],
    private length: number,
  ) {}

  peek(): Token | null {
    return this.pos < this.tokens.length ? this.tokens[this.pos] : null;
  }

  take(): Token {
    return this.tokens[this.pos++];
  }

  fail(message: string): never {
    const token = this.peek();
    throw { offset: token ? token.start : this.length, message };
  }

  parseIff(): Ast {
    let node = this.parseImp();
    while (this.peek()?.kind === "<->") {
      this.take();
      node = { kind: "iff", left: node, right: this.parseImp() };
    }
    return node;
  }

  parseImp(): Ast {
    const left = this.parseXor();
    if (this.peek()?.kind === "->") {
      this.take();
      return { kind: "imp", left, right: this.parseImp() };
    }
    return left;
  }

  parseXor(): Ast {
    let node = this.parseOr();
    while (this.peek()?.kind === "xor") {
      this.take();
      node = { kind: "xor", left: node, right: this.parseOr() };
    }
    return node;
  }

  parseOr(): Ast {
    let node = this.parseAnd();
    while (this.peek()?.kind === "|") {
      this.take();
      node = { kind: "or", left: node, right: this.parseAnd() };
    }
    return node;
  }

  parseAnd(): Ast {
    let node = this.parseUnary();
    while (this.peek()?.kind === "&") {
      this.take();
      node = { kind: "and", left: node, right: this.parseUnary() };
    }
    return node;
  }

  parseUnary(): Ast {
    if (this.peek()?.kind === "!") {
      this.take();
      return { kind: "not", child: this.parseUnary() };
    }
    return this.parseAtom();
  }

  parseAtom(): Ast {
    const token = this.peek();
    if (token === null) this.fail("formula expected");
    if (token.kind === "ident") {
      this.take();
      return { kind: "var", name: token.text };
    }
    if (token.kind === "const") {
      this.take();
      return { kind: "const", value: token.text === "true" };
    }
    if (token.kind === "(") {
      this.take();
      const inner = this.parseIff();
      if (this.peek()?.kind !== ")") this.fail("')' expected");
      this.take();
      return inner;
    }
    this.fail(`formula expected before '${token.text}'`);
  }
}

export function parsePreview(text: string): ParseResult {
  const tokens = tokenize(text);
  if (!Array.isArray(tokens)) {
    return { ok: false, ...tokens };
  }
  if (tokens.length === 0) {
    return { ok: false, offset: 0, message: "empty input" };
  }
  const parser = new Parser(tokens, text.length);
  try {
    const ast = parser.parseIff();
    const leftover = parser.peek();
    if (leftover !== null) {
      return { ok: false, offset: leftover.start, message: `unexpected '${leftover.text}'` };
    }
    return { ok: true, ast };
  } catch (err) {
    const { offset, message } = err as { offset: number; message: string };
    return { ok: false, offset, message };
  }
}

const PRETTY_OPS: Record<string, string> = {
  and: "∧",
  or: "∨",
  xor: "⊕",
  imp: "→",
  iff: "↔",
};

const PRECEDENCE: Record<string, number> = { iff: 0, imp: 1, xor: 2, or: 3, and: 4 };
const NOT_PREC = 5;
const ATOM_PREC = 6;

function prec(ast: Ast): number {
  if (ast.kind === "not") return NOT_PREC;
  if (ast.kind === "var" || ast.kind === "const") return ATOM_PREC;
  return PRECEDENCE[ast.kind];
}

/** Unicode rendering of a preview AST, minimal parentheses. */
export function pretty(ast: Ast): string {
  if (ast.kind === "var") return ast.name;
  if (ast.kind === "const") return ast.value ? "true" : "false";
  if (ast.kind === "not") {
    const inner = pretty(ast.child);
    return prec(ast.child) < NOT_PREC ? `¬(${inner})` : `¬${inner}`;
  }
  const p = PRECEDENCE[ast.kind];
  const rightAssoc = ast.kind === "imp";
  let left = pretty(ast.left);
  let right = pretty(ast.right);
  const lp = prec(ast.left);
  const rp = prec(ast.right);
  if (lp < p || (lp === p && rightAssoc)) left = `(${left})`;
  if (rp < p || (rp === p && !rightAssoc)) right = `(${right})`;
  return `${left} ${PRETTY_OPS[ast.kind]} ${right}`;
}
