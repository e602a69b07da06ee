import type { SessionView } from './state.js';
import type { DesignSpec, MarkSpec, PaletteChannel } from './types.js';

/**
 * Channel ids legal for one column of a mark: same value kind as the
 * current binding, compatible with the mark's shape class, and not
 * already used by a sibling column (conjunction injectivity).
 */
export function channelOptions(view: SessionView, design: DesignSpec,
                               mark: MarkSpec, column: string): string[] {
  const palette = view.state.palette;
  const shapeClass =
    palette.shapes.find((s) => s.id === mark.shape)?.class ?? 'polygon';
  const current = mark.channels.find((c) => c.column === column);
  if (!current) {
    return [];
  }
  const currentKind = palette.channels
    .find((c) => c.id === current.channel)?.value_kind ?? 'quantitative';
  const siblings = new Set(mark.channels
    .filter((c) => c.column !== column)
    .map((c) => c.channel));
  const applies = (channel: PaletteChannel) =>
    channel.applies_to === 'both' || channel.applies_to === shapeClass;
  return palette.channels
    .filter((c) => c.value_kind === currentKind && applies(c))
    .filter((c) => mark.repeat || !siblings.has(c.id))
    .map((c) => c.id);
}

/** Shape ids a mark could swap to: anything not used by another mark. */
export function shapeOptions(view: SessionView, design: DesignSpec,
                             mark: MarkSpec): string[] {
  const used = new Set(design.marks
    .filter((m) => m.set_index !== mark.set_index)
    .map((m) => m.shape));
  return view.state.palette.shapes
    .map((s) => s.id)
    .filter((id) => !used.has(id));
}

export interface OverridePanel {
  element: HTMLElement;
  render(): void;
}

/**
 * Per-mark shape and channel pickers for the selected glyph's design;
 * every change calls the override endpoint and re-renders from the
 * server response.
 */
export function overridePanel(view: SessionView): OverridePanel {
  const root = document.createElement('div');
  root.className = 'override-panel';

  const error = document.createElement('div');
  error.className = 'override-error';

  function apply(designId: string, body: Parameters<
      typeof view.api.override>[2]): void {
    error.textContent = '';
    void view
      .mutate(() => view.api.override(view.sessionId, designId, body))
      .catch((failure: Error) => {
        error.textContent = failure.message;
        render();
      });
  }

  function render(): void {
    root.replaceChildren();
    root.appendChild(error);
    const selected = view.state.selection?.[0];
    const design = view.state.designs.find((d) => d.id === selected);
    if (!design) {
      const hint = document.createElement('div');
      hint.className = 'hint';
      hint.textContent = 'Select a glyph to refine its design.';
      root.appendChild(hint);
      return;
    }

    const title = document.createElement('h3');
    title.textContent = `Refine ${design.id}`;
    root.appendChild(title);

    for (const mark of design.marks) {
      const card = document.createElement('div');
      card.className = 'mark-card';
      card.dataset.setIndex = String(mark.set_index);

      const shapePicker = document.createElement('select');
      shapePicker.className = 'shape-picker';
      for (const id of shapeOptions(view, design, mark)) {
        const option = document.createElement('option');
        option.value = id;
        option.textContent = id;
        option.selected = id === mark.shape;
        shapePicker.appendChild(option);
      }
      shapePicker.disabled = view.pending;
      shapePicker.addEventListener('change', () => {
        apply(design.id,
              { set_index: mark.set_index, new_shape: shapePicker.value });
      });
      const shapeLabel = document.createElement('label');
      shapeLabel.textContent = mark.repeat ? 'shape (repeated)' : 'shape';
      shapeLabel.appendChild(shapePicker);
      card.appendChild(shapeLabel);

      const columns = mark.repeat
        ? [mark.channels[0]]   // one shared channel for the whole group
        : mark.channels;
      for (const binding of columns) {
        const picker = document.createElement('select');
        picker.className = 'channel-picker';
        picker.dataset.column = binding.column;
        for (const id of channelOptions(view, design, mark, binding.column)) {
          const option = document.createElement('option');
          option.value = id;
          option.textContent = id;
          option.selected = id === binding.channel;
          picker.appendChild(option);
        }
        picker.disabled = view.pending;
        picker.addEventListener('change', () => {
          apply(design.id, {
            set_index: mark.set_index,
            column: mark.repeat ? undefined : binding.column,
            new_channel: picker.value,
          });
        });
        const label = document.createElement('label');
        label.textContent = mark.repeat
          ? 'channel (shared)' : `${binding.column} →`;
        label.appendChild(picker);
        card.appendChild(label);
      }
      root.appendChild(card);
    }
  }

  view.subscribe(render);
  render();
  return { element: root, render };
}
