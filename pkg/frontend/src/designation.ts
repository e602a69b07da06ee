import type { Api } from './api.js';
import type {
  ColumnInfo,
  SetDesignation,
  SetSpec,
  ValidateResponse,
  Violation,
} from './types.js';

/** Mutable draft of a column-set designation being built. */
export interface Draft {
  sets: SetSpec[];
}

export function unassignedColumns(columns: ColumnInfo[], draft: Draft):
    ColumnInfo[] {
  const taken = new Set(draft.sets.flatMap((s) => s.columns));
  return columns.filter((c) => !taken.has(c.name));
}

export function canGroup(staged: string[], designation: SetDesignation):
    boolean {
  if (designation === 'single') {
    return staged.length === 1;
  }
  return staged.length >= 2;
}

export function createSet(draft: Draft, staged: string[],
                          designation: SetDesignation): Draft {
  if (!canGroup(staged, designation)) {
    return draft;
  }
  return { sets: [...draft.sets, { columns: [...staged], designation }] };
}

export function removeSet(draft: Draft, index: number): Draft {
  return { sets: draft.sets.filter((_, i) => i !== index) };
}

export function addColumnToSet(draft: Draft, index: number,
                               column: string): Draft {
  const sets = draft.sets.map((s, i) => {
    if (i !== index || s.columns.includes(column)) {
      return s;
    }
    const designation =
      s.designation === 'single' ? 'conjunction' : s.designation;
    return { columns: [...s.columns, column], designation };
  });
  return { sets };
}

export interface DesignationScreen {
  element: HTMLElement;
  draft(): Draft;
  violations(): Violation[];
}

export interface DesignationCallbacks {
  onGenerate(sets: SetSpec[]): void;
}

/**
 * Column list with type badges plus set-building controls.  Columns are
 * staged by click (or dragged onto a set card) and grouped with one of
 * the designation buttons; every change round-trips through the
 * service's validate endpoint and renders its violations inline.
 */
export function designationScreen(api: Api, csv: string, key: string,
                                  columns: ColumnInfo[],
                                  callbacks: DesignationCallbacks):
    DesignationScreen {
  let draft: Draft = { sets: [] };
  let staged: string[] = [];
  let violations: Violation[] = [];

  const root = document.createElement('div');
  root.className = 'designation-screen';

  const pool = document.createElement('div');
  pool.className = 'column-pool';
  const setList = document.createElement('div');
  setList.className = 'set-list';
  const controls = document.createElement('div');
  controls.className = 'group-controls';
  const messages = document.createElement('div');
  messages.className = 'validation-messages';
  const footer = document.createElement('div');
  footer.className = 'designation-footer';

  const generate = document.createElement('button');
  generate.className = 'generate';
  generate.textContent = 'Generate designs';
  generate.disabled = true;
  generate.addEventListener('click', () => {
    if (!generate.disabled) {
      callbacks.onGenerate(draft.sets);
    }
  });
  footer.appendChild(generate);

  for (const designation of ['single', 'conjunction', 'repeat'] as const) {
    const button = document.createElement('button');
    button.className = `group-as-${designation}`;
    button.textContent = `Group as ${designation}`;
    button.addEventListener('click', () => {
      if (canGroup(staged, designation)) {
        draft = createSet(draft, staged, designation);
        staged = [];
        void update();
      }
    });
    controls.appendChild(button);
  }

  root.append(pool, controls, setList, messages, footer);

  async function revalidate(): Promise<void> {
    if (draft.sets.length === 0) {
      violations = [];
      renderMessages(null);
      generate.disabled = true;
      return;
    }
    const result = await api.validate(csv, key, draft.sets);
    violations = result.violations;
    renderMessages(result);
    generate.disabled = !result.ok;
  }

  function renderMessages(result: ValidateResponse | null): void {
    messages.replaceChildren();
    if (result === null) {
      const hint = document.createElement('div');
      hint.className = 'hint';
      hint.textContent = 'Group at least one column to start.';
      messages.appendChild(hint);
      return;
    }
    if (result.ok) {
      const ok = document.createElement('div');
      ok.className = 'validation-ok';
      ok.textContent = 'Designation is valid.';
      messages.appendChild(ok);
      return;
    }
    for (const violation of result.violations) {
      const row = document.createElement('div');
      row.className = `violation violation-${violation.code}`;
      row.textContent = violation.set_index != null
        ? `Set ${violation.set_index + 1}: ${violation.message}`
        : violation.message;
      messages.appendChild(row);
    }
  }

  function renderPool(): void {
    pool.replaceChildren();
    for (const column of unassignedColumns(columns, draft)) {
      const chip = document.createElement('button');
      chip.className = `column-chip kind-${column.kind}`;
      chip.draggable = true;
      chip.dataset.column = column.name;
      if (staged.includes(column.name)) {
        chip.classList.add('staged');
      }
      const name = document.createElement('span');
      name.textContent = column.name;
      const badge = document.createElement('span');
      badge.className = 'kind-badge';
      badge.textContent = column.kind === 'categorical' ? 'C' : 'Q';
      badge.title = column.kind;
      chip.append(name, badge);
      chip.addEventListener('click', () => {
        staged = staged.includes(column.name)
          ? staged.filter((c) => c !== column.name)
          : [...staged, column.name];
        renderPool();
        renderControls();
      });
      chip.addEventListener('dragstart', (event) => {
        event.dataTransfer?.setData('text/column', column.name);
      });
      pool.appendChild(chip);
    }
  }

  function renderControls(): void {
    for (const designation of ['single', 'conjunction', 'repeat'] as const) {
      const button =
        controls.querySelector<HTMLButtonElement>(`.group-as-${designation}`);
      if (button) {
        button.disabled = !canGroup(staged, designation);
      }
    }
  }

  function renderSets(): void {
    setList.replaceChildren();
    draft.sets.forEach((set, index) => {
      const card = document.createElement('div');
      card.className = 'set-card';
      card.dataset.setIndex = String(index);

      const label = document.createElement('select');
      label.className = 'set-designation';
      for (const value of ['single', 'conjunction', 'repeat']) {
        const option = document.createElement('option');
        option.value = value;
        option.textContent = value;
        option.selected = value === set.designation;
        label.appendChild(option);
      }
      label.addEventListener('change', () => {
        draft.sets[index] =
          { ...set, designation: label.value as SetDesignation };
        void update();
      });

      const cols = document.createElement('span');
      cols.className = 'set-columns';
      cols.textContent = set.columns.join(', ');

      const remove = document.createElement('button');
      remove.className = 'remove-set';
      remove.textContent = 'Ungroup';
      remove.addEventListener('click', () => {
        draft = removeSet(draft, index);
        void update();
      });

      card.addEventListener('dragover', (event) => event.preventDefault());
      card.addEventListener('drop', (event) => {
        const column = event.dataTransfer?.getData('text/column');
        if (column) {
          draft = addColumnToSet(draft, index, column);
          void update();
        }
      });

      card.append(label, cols, remove);
      setList.appendChild(card);
    });
  }

  async function update(): Promise<void> {
    renderPool();
    renderControls();
    renderSets();
    await revalidate();
  }

  void update();

  return {
    element: root,
    draft: () => draft,
    violations: () => violations,
  };
}
