import { Api } from './api.js';
import { designationScreen } from './designation.js';
import { galleryScreen } from './gallery.js';
import { overridePanel } from './override.js';
import { openSession, SessionView } from './state.js';
import type { ColumnInfo, SetSpec } from './types.js';

/**
 * Three-step app: paste a CSV, designate column sets, then curate the
 * generated gallery.  The session id lives in the URL hash so a reload
 * restores the exact server-side state.
 */
export function mountApp(root: HTMLElement, api: Api): void {
  root.replaceChildren();
  const screen = document.createElement('div');
  screen.className = 'app';
  root.appendChild(screen);

  const hash = window.location.hash.replace(/^#/, '');
  if (hash) {
    void resumeSession(hash);
  } else {
    showUpload();
  }

  function showUpload(): void {
    screen.replaceChildren();
    const form = document.createElement('div');
    form.className = 'upload-screen';

    const csvInput = document.createElement('textarea');
    csvInput.className = 'csv-input';
    csvInput.placeholder = 'Paste a CSV table (header row first)';
    const keyInput = document.createElement('input');
    keyInput.className = 'key-input';
    keyInput.placeholder = 'Row-identifier column';
    const fileInput = document.createElement('input');
    fileInput.type = 'file';
    fileInput.className = 'csv-file';
    fileInput.accept = '.csv,text/csv';
    fileInput.addEventListener('change', () => {
      const file = fileInput.files?.[0];
      if (file) {
        void file.text().then((text) => {
          csvInput.value = text;
        });
      }
    });
    const loadButton = document.createElement('button');
    loadButton.className = 'load-table';
    loadButton.textContent = 'Load table';
    const problem = document.createElement('div');
    problem.className = 'upload-error';

    loadButton.addEventListener('click', () => {
      problem.textContent = '';
      const csv = csvInput.value;
      const key = keyInput.value.trim();
      if (!csv.trim() || !key) {
        problem.textContent = 'Provide both a CSV table and its key column.';
        return;
      }
      api.validate(csv, key, [])
        .then((result) => showDesignation(csv, key, result.columns))
        .catch((failure: Error) => {
          problem.textContent = failure.message;
        });
    });

    form.append(csvInput, fileInput, keyInput, loadButton, problem);
    screen.appendChild(form);
  }

  function showDesignation(csv: string, key: string,
                           columns: ColumnInfo[]): void {
    screen.replaceChildren();
    const builder = designationScreen(api, csv, key, columns, {
      onGenerate(sets: SetSpec[]) {
        void createAndShow(csv, key, sets);
      },
    });
    screen.appendChild(builder.element);
  }

  async function createAndShow(csv: string, key: string,
                               sets: SetSpec[]): Promise<void> {
    const created = await api.createSession(csv, key, sets,
                                            Date.now() % 0xffff_ffff);
    window.location.hash = created.session_id;
    const view = await openSession(api, created.session_id);
    showGallery(view);
  }

  async function resumeSession(sessionId: string): Promise<void> {
    try {
      const view = await openSession(api, sessionId);
      showGallery(view);
    } catch {
      window.location.hash = '';
      showUpload();
    }
  }

  function showGallery(view: SessionView): void {
    screen.replaceChildren();
    const layout = document.createElement('div');
    layout.className = 'gallery-layout';
    const gallery = galleryScreen(view);
    const refine = overridePanel(view);
    layout.append(gallery.element, refine.element);
    screen.appendChild(layout);
  }
}

declare global {
  interface Window {
    glyphgenMount?: typeof mountApp;
  }
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  mountApp(document.getElementById('app')!, new Api(''));
}
window.glyphgenMount = mountApp;
