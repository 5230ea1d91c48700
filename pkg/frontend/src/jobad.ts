/**
 * Browser-side interactivity for served lecture pages.
 *
 * Works entirely off the page's own annotations: the MathML parallel markup
 * resolves clicked presentation nodes to OpenMath symbols (definition
 * lookup), and the RDFa attributes drive proof-step folding and
 * related-resource popups. All network calls go to same-origin endpoints
 * (`/omdoc/{theory}`, `/neighborhood`).
 */

/** Resolution of a click on an annotated presentation node. */
export interface SymbolHit {
    presentationId: string;
    contentNode: Element;
    symbolUri: string;
}

// Same-origin prefix for fetches; empty in the browser, set by tests.
let serverOrigin = "";

/** Point network calls at an explicit origin (testing hook). */
export function configure(origin: string): void {
    serverOrigin = origin;
}

function byLocalName(root: Element | Document, name: string): Element[] {
    return Array.from(root.getElementsByTagNameNS("*", name));
}

function pageDocument(root: Document | Element): Document {
    return root.ownerDocument ?? (root as Document);
}

function pageBody(doc: Document): Element | null {
    return byLocalName(doc, "body")[0] ?? null;
}

/** Base URI of the page's resources, recovered from the body's RDFa. */
export function pageBaseUri(doc: Document): string | null {
    const about = pageBody(doc)?.getAttribute("about");
    if (!about) return null;
    const cut = about.lastIndexOf("/omdoc/");
    return cut < 0 ? null : about.slice(0, cut);
}

/** Server path for one of our dereferenceable URIs. */
function uriToPath(uri: string): string {
    const cut = uri.indexOf("/omdoc/");
    return cut < 0 ? uri : uri.slice(cut);
}

// ---------------------------------------------------------------------------
// attach

/**
 * Install all handlers on a served page: symbol clicks on every annotated
 * presentation node, fold controls on proof steps and proofs, "related"
 * buttons on annotated sections. Idempotent; a no-op on pages without the
 * relevant markup.
 */
export function attach(root: Document | Element): void {
    const doc = pageDocument(root);
    const base = pageBaseUri(doc);
    for (const math of byLocalName(root as Element, "math")) {
        if (base !== null) wireMath(math, base, doc);
    }
    for (const step of queryTyped(root, "o:ProofStep")) {
        wireFoldControl(step, doc);
    }
    for (const proof of queryTyped(root, "o:Proof")) {
        wireFoldControl(proof, doc);
    }
    for (const section of Array.from(
            (root as Element).querySelectorAll?.("section[about]") ?? [])) {
        wireRelatedButton(section as Element, doc);
    }
}

function queryTyped(root: Document | Element, type: string): Element[] {
    const all = (root as Element).querySelectorAll?.("[typeof]") ?? [];
    return Array.from(all).filter(el => {
        const words = (el.getAttribute("typeof") ?? "").split(/\s+/);
        return words.includes(type);
    });
}

function wireMath(math: Element, base: string, doc: Document): void {
    // presentation id -> element, without relying on XML ID semantics
    const byId = new Map<string, Element>();
    for (const el of Array.from(math.querySelectorAll("[id]"))) {
        byId.set(el.getAttribute("id")!, el);
    }
    for (const oms of byLocalName(math, "OMS")) {
        const xref = oms.getAttribute("xref");
        const cd = oms.getAttribute("cd");
        const name = oms.getAttribute("name");
        if (!xref || !cd || !name) continue;
        const pres = byId.get(xref);
        if (!pres || pres.getAttribute("data-jobad") === "symbol") continue;
        pres.setAttribute("data-jobad", "symbol");
        const hit: SymbolHit = {
            presentationId: xref,
            contentNode: oms,
            symbolUri: `${base}/omdoc/${cd}#${name}`,
        };
        pres.addEventListener("click", event => {
            event.stopPropagation();
            void lookupDefinition(hit, doc, event as MouseEvent);
        });
    }
}

// ---------------------------------------------------------------------------
// popups (one at a time; Escape dismisses; stale fetches are dropped)

let popupToken = 0;

function dismissPopup(doc: Document): void {
    popupToken += 1;
    doc.querySelector(".jobad-popup")?.remove();
}

function openPopup(doc: Document, title: string, at?: MouseEvent): Element {
    dismissPopup(doc);
    const popup = doc.createElement("div");
    popup.className = "jobad-popup";
    if (at) {
        popup.setAttribute(
            "style", `left: ${at.pageX ?? 0}px; top: ${(at.pageY ?? 0) + 12}px;`);
    }
    const head = doc.createElement("div");
    head.className = "jobad-popup-head";
    const label = doc.createElement("span");
    label.textContent = title;
    const close = doc.createElement("button");
    close.className = "jobad-popup-close";
    close.textContent = "×";
    close.addEventListener("click", () => dismissPopup(doc));
    head.append(label, close);
    const body = doc.createElement("div");
    body.className = "jobad-popup-body";
    popup.append(head, body);
    pageBody(doc)?.appendChild(popup);
    if (!(doc as any).jobadEscapeWired) {
        (doc as any).jobadEscapeWired = true;
        doc.addEventListener("keydown", event => {
            if ((event as KeyboardEvent).key === "Escape") dismissPopup(doc);
        });
    }
    return body;
}

function currentPopupBody(doc: Document, token: number): Element | null {
    if (token !== popupToken) return null; // dismissed or replaced meanwhile
    return doc.querySelector(".jobad-popup .jobad-popup-body");
}

// ---------------------------------------------------------------------------
// definition lookup

/**
 * Fetch the theory page behind a clicked symbol and show its declaration
 * and defining statement in a popup. Shows "no definition found" when the
 * theory 404s or carries no matching section.
 */
export async function lookupDefinition(
        hit: SymbolHit, doc: Document, at?: MouseEvent): Promise<void> {
    const body = openPopup(doc, hit.symbolUri.split("#")[1] ?? "symbol", at);
    const token = popupToken;
    body.textContent = "…";
    let page: Document | null = null;
    try {
        const resp = await fetch(serverOrigin + uriToPath(hit.symbolUri.split("#")[0]),
                                 {headers: {Accept: "application/xhtml+xml"}});
        if (resp.ok) {
            const text = await resp.text();
            page = new DOMParser().parseFromString(text, "application/xhtml+xml");
        }
    } catch {
        page = null;
    }
    const target = currentPopupBody(doc, token);
    if (!target) return;
    target.textContent = "";
    const sections = page ? definitionSections(page, hit.symbolUri) : [];
    if (!sections.length) {
        target.textContent = "no definition found";
        return;
    }
    for (const section of sections) {
        target.appendChild(doc.importNode(section, true));
    }
}

/** Declaration section plus any o:defines statements targeting the symbol. */
export function definitionSections(page: Document, symbolUri: string): Element[] {
    const out: Element[] = [];
    for (const section of byLocalName(page, "section")) {
        const types = (section.getAttribute("typeof") ?? "").split(/\s+/);
        if (section.getAttribute("about") === symbolUri && types.includes("o:Symbol")) {
            out.push(section);
        }
    }
    for (const link of byLocalName(page, "a")) {
        const rel = (link.getAttribute("rel") ?? "").split(/\s+/);
        if (rel.includes("o:defines") && link.getAttribute("href") === symbolUri) {
            const section = link.closest("section");
            if (section && !out.includes(section)) out.push(section);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// folding

/**
 * Collapse a proof step to its header, or restore it exactly; on a proof
 * container, fold or unfold all steps together. An involution on the DOM
 * modulo the visibility attributes it manages.
 */
export function toggleFold(el: Element): void {
    const types = (el.getAttribute("typeof") ?? "").split(/\s+/);
    if (types.includes("o:ProofStep")) {
        toggleStep(el);
        return;
    }
    const steps = queryTyped(el, "o:ProofStep");
    const foldAll = steps.some(s => !s.hasAttribute("data-folded"));
    for (const step of steps) {
        if (step.hasAttribute("data-folded") !== foldAll) toggleStep(step);
    }
}

function toggleStep(step: Element): void {
    const body = step.querySelector(".step-body");
    if (!body) return;
    if (step.hasAttribute("data-folded")) {
        const prev = step.getAttribute("data-prev-style");
        if (prev === null) body.removeAttribute("style");
        else body.setAttribute("style", prev);
        step.removeAttribute("data-prev-style");
        step.removeAttribute("data-folded");
    } else {
        const prev = body.getAttribute("style");
        if (prev !== null) step.setAttribute("data-prev-style", prev);
        body.setAttribute("style", "display: none");
        step.setAttribute("data-folded", "true");
    }
}

function wireFoldControl(el: Element, doc: Document): void {
    const types = (el.getAttribute("typeof") ?? "").split(/\s+/);
    const head = types.includes("o:ProofStep")
        ? el.querySelector(":scope > .step-head")
        : el.querySelector(":scope > h3");
    if (!head || head.querySelector(".jobad-fold")) return;
    const button = doc.createElement("button");
    button.className = "jobad-fold";
    button.textContent = "▾";
    button.addEventListener("click", event => {
        event.stopPropagation();
        toggleFold(el);
    });
    head.appendChild(button);
}

// ---------------------------------------------------------------------------
// related resources

const INCOMING_LABEL: Record<string, string> = {
    exemplifies: "exemplified by",
    defines: "defined by",
    proves: "proven by",
    imports: "imported by",
    declares: "declared by",
    hasStep: "step of",
    justifiedBy: "justifies",
    usesSymbol: "used by",
};

interface NeighborhoodTriple {
    s: string;
    p: string;
    o: string;
    literal: boolean;
}

/**
 * Show the resource's RDF neighborhood, grouped by predicate, each
 * neighbor linked to its page. Server errors are reported inline.
 */
export async function showRelated(
        resourceUri: string, doc: Document, at?: MouseEvent): Promise<void> {
    const body = openPopup(doc, "related resources", at);
    const token = popupToken;
    body.textContent = "…";
    let triples: NeighborhoodTriple[] | null = null;
    let failure = "no related resources";
    try {
        const resp = await fetch(
            serverOrigin + "/neighborhood?uri=" + encodeURIComponent(resourceUri),
            {headers: {Accept: "application/json"}});
        if (resp.ok) {
            triples = (await resp.json()).triples as NeighborhoodTriple[];
        } else if (resp.status !== 404) {
            failure = `server error (${resp.status})`;
        }
    } catch (err) {
        failure = `server error (${String(err)})`;
    }
    const target = currentPopupBody(doc, token);
    if (!target) return;
    target.textContent = "";
    const groups = triples ? groupNeighbors(triples, resourceUri) : new Map();
    if (!groups.size) {
        target.textContent = failure;
        return;
    }
    const types = typeIndex(triples ?? []);
    for (const [label, neighbors] of groups) {
        const heading = doc.createElement("div");
        heading.className = "jobad-related-label";
        heading.textContent = label + ":";
        target.appendChild(heading);
        const list = doc.createElement("ul");
        for (const uri of neighbors) {
            const item = doc.createElement("li");
            const link = doc.createElement("a");
            link.setAttribute("href", uriToPath(uri));
            link.textContent = uri.split("#")[1] ?? uri.split("/").pop() ?? uri;
            item.appendChild(link);
            const cls = types.get(uri);
            if (cls) item.append(` (${cls})`);
            list.appendChild(item);
        }
        target.appendChild(list);
    }
}

function predicateLocal(p: string): string {
    return p.split("#")[1] ?? p;
}

function groupNeighbors(
        triples: NeighborhoodTriple[], uri: string): Map<string, string[]> {
    const groups = new Map<string, string[]>();
    const put = (label: string, neighbor: string) => {
        const list = groups.get(label) ?? [];
        if (!list.includes(neighbor)) list.push(neighbor);
        groups.set(label, list);
    };
    for (const t of triples) {
        if (t.p === "http://www.w3.org/1999/02/22-rdf-syntax-ns#type") continue;
        if (t.literal) {
            if (t.s === uri) put(predicateLocal(t.p), t.o);
            continue;
        }
        if (t.s === uri && t.o !== uri) {
            put(predicateLocal(t.p), t.o);
        } else if (t.o === uri && t.s !== uri) {
            const local = predicateLocal(t.p);
            put(INCOMING_LABEL[local] ?? `${local} ←`, t.s);
        }
    }
    return groups;
}

function typeIndex(triples: NeighborhoodTriple[]): Map<string, string> {
    const types = new Map<string, string>();
    for (const t of triples) {
        if (t.p === "http://www.w3.org/1999/02/22-rdf-syntax-ns#type") {
            types.set(t.s, t.o.split("#")[1] ?? t.o);
        }
    }
    return types;
}

function wireRelatedButton(section: Element, doc: Document): void {
    const about = section.getAttribute("about");
    if (!about || section.querySelector(":scope > .jobad-related")) return;
    const button = doc.createElement("button");
    button.className = "jobad-related";
    button.textContent = "related";
    button.addEventListener("click", event => {
        event.stopPropagation();
        void showRelated(about, doc, event as MouseEvent);
    });
    section.appendChild(button);
}

// ---------------------------------------------------------------------------

if (typeof document !== "undefined" && typeof window !== "undefined") {
    if (document.readyState === "loading") {
        document.addEventListener("DOMContentLoaded", () => attach(document));
    } else {
        attach(document);
    }
}
