import type { SessionView } from './state.js';
import { createTooltip } from './tooltip.js';

export interface GalleryScreen {
  element: HTMLElement;
  render(): void;
}

/**
 * The curation gallery: the server-rendered sheet SVG with client-side
 * hit regions per glyph key, a mode toggle, pagers, append/cull
 * controls, and a hover legend tooltip.  Clicking a glyph selects its
 * (design, row) pair; which half the cell key supplies depends on the
 * viewing mode.
 */
export function galleryScreen(view: SessionView): GalleryScreen {
  const root = document.createElement('div');
  root.className = 'gallery-screen';

  const toolbar = document.createElement('div');
  toolbar.className = 'gallery-toolbar';
  const sheetBox = document.createElement('div');
  sheetBox.className = 'sheet-box';
  sheetBox.style.position = 'relative';
  const tooltip = createTooltip(sheetBox);

  const modeToggle = document.createElement('button');
  modeToggle.className = 'mode-toggle';
  const prev = document.createElement('button');
  prev.className = 'pager-prev';
  prev.textContent = '←';
  const next = document.createElement('button');
  next.className = 'pager-next';
  next.textContent = '→';
  const pageLabel = document.createElement('span');
  pageLabel.className = 'page-label';
  const appendButton = document.createElement('button');
  appendButton.className = 'append-design';
  appendButton.textContent = 'Generate one more';
  const cullButton = document.createElement('button');
  cullButton.className = 'cull-selected';
  cullButton.textContent = 'Cull selected design';
  const status = document.createElement('span');
  status.className = 'request-status';

  toolbar.append(modeToggle, prev, pageLabel, next, appendButton,
                 cullButton, status);
  root.append(toolbar, sheetBox);

  modeToggle.addEventListener('click', () => {
    const mode = view.state.mode === 'small_multiples'
      ? 'small_permutables' : 'small_multiples';
    void view.mutate(() => view.api.setMode(view.sessionId, mode));
  });
  prev.addEventListener('click', () => {
    void view.mutate(() => view.api.page(view.sessionId, -1));
  });
  next.addEventListener('click', () => {
    void view.mutate(() => view.api.page(view.sessionId, +1));
  });
  appendButton.addEventListener('click', () => {
    void view.mutate(() => view.api.appendDesigns(view.sessionId, 1));
  });
  cullButton.addEventListener('click', () => {
    const selected = view.state.selection?.[0];
    if (selected) {
      void view.mutate(() => view.api.cullDesign(view.sessionId, selected));
    }
  });

  function selectFromCell(key: string): void {
    const state = view.state;
    let designId: string | null;
    let rowKey: string | null;
    if (state.mode === 'small_multiples') {
      designId = view.currentDesignId();
      rowKey = key;
    } else {
      designId = key;
      rowKey = view.currentRowKey();
    }
    if (designId && rowKey) {
      void view.mutate(() => view.api.select(view.sessionId, designId!,
                                             rowKey!));
    }
  }

  function legendTargetForCell(key: string): [string, string] | null {
    const state = view.state;
    if (state.mode === 'small_multiples') {
      const designId = view.currentDesignId();
      return designId ? [designId, key] : null;
    }
    const rowKey = view.currentRowKey();
    return rowKey ? [key, rowKey] : null;
  }

  function attachHitRegions(): void {
    const cells = sheetBox.querySelectorAll<SVGGElement>('g.cell[data-key]');
    cells.forEach((cell) => {
      const key = cell.dataset.key ?? cell.getAttribute('data-key');
      if (!key) {
        return;
      }
      cell.classList.toggle('selected', key === view.selectionKeyForMode());
      cell.addEventListener('click', () => selectFromCell(key));
      cell.addEventListener('mouseenter', (event) => {
        const target = legendTargetForCell(key);
        if (!target) {
          return;
        }
        const at = event as MouseEvent;
        view.api.legend(view.sessionId, target[0], target[1])
          .then((legend) => tooltip.show(at.clientX, at.clientY, legend))
          .catch(() => tooltip.hide());
      });
      cell.addEventListener('mouseleave', () => tooltip.hide());
    });
  }

  function render(): void {
    const state = view.state;
    modeToggle.textContent = state.mode === 'small_multiples'
      ? 'View small permutables' : 'View small multiples';
    const count = state.page_count;
    pageLabel.textContent = count > 0
      ? `${state.page_index + 1} / ${count}` : '—';
    prev.disabled = view.pending || state.page_index <= 0;
    next.disabled = view.pending || state.page_index >= count - 1;
    modeToggle.disabled = view.pending;
    appendButton.disabled = view.pending;
    cullButton.disabled = view.pending || !state.selection;
    status.textContent = view.pending ? 'working…' : '';

    sheetBox.replaceChildren(tooltip.element);
    const holder = document.createElement('div');
    holder.className = 'sheet-holder';
    holder.innerHTML = view.sheet;
    sheetBox.appendChild(holder);
    attachHitRegions();
  }

  view.subscribe(render);
  render();
  return { element: root, render };
}
