import type { LegendModel } from './types.js';

export interface Tooltip {
  element: HTMLDivElement;
  show(x: number, y: number, legend: LegendModel): void;
  hide(): void;
}

/** Floating legend tooltip: one row per mark, swatch + bindings. */
export function createTooltip(parent: HTMLElement): Tooltip {
  const div = document.createElement('div');
  div.className = 'legend-tooltip';
  div.style.position = 'absolute';
  div.style.display = 'none';
  div.style.pointerEvents = 'none';
  parent.appendChild(div);

  return {
    element: div,
    show(x, y, legend) {
      div.replaceChildren();
      const title = document.createElement('div');
      title.className = 'legend-row-key';
      title.textContent = legend.row_key;
      div.appendChild(title);
      for (const entry of legend.entries) {
        const row = document.createElement('div');
        row.className = 'legend-entry';
        const swatch = document.createElement('span');
        swatch.className = 'swatch';
        swatch.style.background = entry.color;
        row.appendChild(swatch);
        const label = document.createElement('span');
        label.className = 'legend-text';
        const parts = entry.columns.map(
          (column, i) =>
            `${column} → ${entry.channels[i]}: ${entry.values[i]}`);
        label.textContent = `${entry.shape} · ${parts.join(', ')}`;
        row.appendChild(label);
        div.appendChild(row);
      }
      div.style.left = `${x + 12}px`;
      div.style.top = `${y + 12}px`;
      div.style.display = 'block';
    },
    hide() {
      div.style.display = 'none';
    },
  };
}
