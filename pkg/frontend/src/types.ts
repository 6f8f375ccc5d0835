/** Wire types mirroring the backend's JSON responses (snake_case fields). */

export interface ExerciseSummary {
  id: string;
  title: string;
}

export interface FeedbackItemWire {
  level: number;
  kind: string;
  key: string;
  params: Record<string, unknown>;
  text: string;
  span?: number[];
  assignment?: Record<string, boolean>;
}

export interface ActionResponse {
  accepted: boolean;
  verdict: string | null;
  items: FeedbackItemWire[];
  task_completed: boolean;
  session_completed: boolean;
  current_task: number;
  error_class: string;
  statement?: number;
  clause?: { id: number; literals: string[] };
  score?: number | null;
}

export interface OfferedVariable {
  name: string;
  meaning: string;
}

export interface StatementView {
  index: number;
  description: string;
  accepted?: boolean;
  text?: string | null;
}

export interface ClauseView {
  id: number;
  literals: string[];
  parents: number[] | null;
  pivot: string | null;
}

export interface QuestionView {
  text: string;
  options: string[];
}

export interface RuleView {
  id: string;
  name_key: string;
}

export interface FormulaTree {
  node: string;
  text: string;
  name?: string;
  value?: boolean;
  children?: FormulaTree[];
}

export interface TaskView {
  index: number;
  type: string;
  title: string;
  description: string;
  inputs: string[];
  output: string | null;
  feedback_levels: number[];
  status?: string;
  offered?: OfferedVariable[];
  chosen?: string[];
  statements?: StatementView[];
  target?: { kind: string; formula?: string };
  rules?: RuleView[];
  questions?: QuestionView[];
  prompt?: string;
  original?: string;
  steps?: string[];
  current?: string;
  complete?: boolean;
  tree?: FormulaTree;
  clauses?: ClauseView[];
  goal_reached?: boolean;
  premises?: string[];
  conclusion?: string;
}

export interface SessionView {
  session: string;
  exercise: string;
  group: string;
  current: number;
  completed: boolean;
  tasks: TaskView[];
  environment: Record<string, unknown>;
}
