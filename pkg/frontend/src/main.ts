// Browser bootstrap: binds DOM events to the viewer controller.

import { ApiClient } from "./api.js";
import { ViewerController, type ViewerEvents } from "./controller.js";
import type { DrawContext } from "./scene.js";
import type { SearchHit } from "./types.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
}

export function bootstrap(
  doc: Document = document,
  ctxFactory?: (canvas: HTMLCanvasElement) => DrawContext,
  apiBase = "",
): ViewerController {
  const canvas = byId<HTMLCanvasElement>("map");
  const ctx = ctxFactory
    ? ctxFactory(canvas)
    : (canvas.getContext("2d") as unknown as DrawContext);

  const banner = byId<HTMLDivElement>("banner");
  const status = byId<HTMLDivElement>("status");
  const results = byId<HTMLUListElement>("results");
  const filePanel = byId<HTMLElement>("file-panel");
  const fileTitle = byId<HTMLDivElement>("file-title");
  const fileBody = byId<HTMLPreElement>("file-body");
  const hoverBox = byId<HTMLDivElement>("hover");

  const events: ViewerEvents = {
    onStatus: (text) => {
      status.textContent = text;
    },
    onError: (message) => {
      banner.hidden = message === null;
      if (message !== null) {
        banner.replaceChildren(doc.createTextNode(message));
        const retry = doc.createElement("button");
        retry.textContent = "retry";
        retry.addEventListener("click", () => void controller.load());
        banner.appendChild(retry);
      }
    },
    onHits: (hits: SearchHit[]) => {
      results.replaceChildren(
        ...hits.map((hit) => {
          const row = doc.createElement("li");
          row.textContent = `${hit.path} (${hit.count})`;
          row.addEventListener("click", () => controller.focusFile(hit.path));
          return row;
        }),
      );
    },
    onFileOpened: (path, content) => {
      filePanel.hidden = false;
      fileTitle.textContent = path;
      fileBody.textContent = content;
    },
    onModelLoaded: (model) => {
      status.textContent = `${model.files.length} files mapped`;
    },
    onArrowHover: (paths) => {
      hoverBox.hidden = paths === null;
      if (paths !== null) {
        hoverBox.textContent = paths.join("\n");
      }
    },
  };

  const controller = new ViewerController(
    new ApiClient(apiBase),
    ctx,
    canvas.width,
    canvas.height,
    events,
  );

  const pointer = (event: MouseEvent) => {
    const rect = canvas.getBoundingClientRect();
    return { x: event.clientX - rect.left, y: event.clientY - rect.top };
  };

  canvas.addEventListener("wheel", (event) => {
    event.preventDefault();
    const p = pointer(event);
    controller.wheel(p.x, p.y, event.deltaY);
  });

  let dragging = false;
  let last = { x: 0, y: 0 };
  canvas.addEventListener("mousedown", (event) => {
    dragging = true;
    last = pointer(event);
  });
  canvas.addEventListener("mousemove", (event) => {
    const p = pointer(event);
    if (dragging) {
      controller.pan(p.x - last.x, p.y - last.y);
      last = p;
    } else {
      controller.hover(p.x, p.y);
    }
  });
  canvas.addEventListener("mouseup", () => {
    dragging = false;
  });
  canvas.addEventListener("mouseleave", () => {
    dragging = false;
  });
  canvas.addEventListener("dblclick", (event) => {
    const p = pointer(event);
    void controller.doubleClick(p.x, p.y);
  });

  const anchorToggle = byId<HTMLInputElement>("anchor-toggle");
  const anchorPrefix = byId<HTMLInputElement>("anchor-prefix");
  anchorToggle.addEventListener("change", () => {
    controller.anchorMode = anchorToggle.checked;
  });
  canvas.addEventListener("click", (event) => {
    if (controller.anchorMode) {
      const p = pointer(event);
      void controller.placeAnchor(p.x, p.y, anchorPrefix.value);
    }
  });

  const searchBox = byId<HTMLInputElement>("search-box");
  searchBox.addEventListener("keydown", (event) => {
    if (event.key === "Enter") {
      void controller.search(searchBox.value);
    }
  });
  byId<HTMLButtonElement>("search-go").addEventListener("click", () => {
    void controller.search(searchBox.value);
  });

  const callersBox = byId<HTMLInputElement>("callers-box");
  callersBox.addEventListener("keydown", (event) => {
    if (event.key === "Enter") {
      if (callersBox.value) {
        void controller.showCallers(callersBox.value);
      } else {
        controller.clearCallers();
      }
    }
  });

  void controller.load();
  return controller;
}

if (typeof document !== "undefined" && document.getElementById("map")) {
  bootstrap();
}
