/** DOM rendering for the single-claim annotation screen. */
import { AnnotationApi } from "./api.js";
import { AnnotationSession } from "./app.js";
import { renderMarkdown } from "./markdown.js";
import {
  AGREEMENT_LABELS,
  SEVERITY_DEFINITIONS,
  SEVERITY_LEVELS,
  type Severity,
  type Validity,
} from "./types.js";

export function renderSession(root: HTMLElement, session: AnnotationSession): void {
  root.innerHTML = "";
  if (session.banner) {
    const banner = document.createElement("div");
    banner.className = "banner";
    banner.textContent = session.banner;
    const retry = document.createElement("button");
    retry.textContent = "Retry";
    retry.addEventListener("click", () => {
      void session.retry().then(() => renderSession(root, session));
    });
    banner.appendChild(retry);
    root.appendChild(banner);
  }
  if (session.screen === "done") {
    const done = document.createElement("h2");
    done.textContent = `All tasks complete — thank you. (${session.completed} submitted)`;
    root.appendChild(done);
    return;
  }
  if (session.screen !== "task" || !session.currentTask) {
    const loading = document.createElement("p");
    loading.textContent = "Loading next task…";
    root.appendChild(loading);
    return;
  }

  const task = session.currentTask;
  const progress = document.createElement("p");
  progress.className = "progress";
  progress.textContent = `Task ${task.progress.done + 1} of ${task.progress.total}`;
  root.appendChild(progress);

  // read-only context panes
  for (const [title, markdown] of [
    [`Section: ${task.section.heading}`, task.section.text],
    ["What the funder is looking for", task.opportunity_excerpt],
    ["Review guidelines", task.guidelines],
  ] as const) {
    const pane = document.createElement("section");
    pane.className = "context-pane";
    const heading = document.createElement("h3");
    heading.textContent = title;
    const body = document.createElement("div");
    body.innerHTML = renderMarkdown(markdown);
    pane.append(heading, body);
    root.appendChild(pane);
  }

  // the claim under judgment, verbatim
  const claimBox = document.createElement("blockquote");
  claimBox.className = `claim valence-${task.claim.valence}`;
  claimBox.textContent = task.claim.text;
  root.appendChild(claimBox);

  const form = document.createElement("form");
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void session.submit().then(() => renderSession(root, session));
  });

  // validity toggle
  const validityRow = document.createElement("fieldset");
  validityRow.append(legend("Is the claim valid?"));
  for (const value of ["valid", "invalid"] as Validity[]) {
    validityRow.appendChild(
      radio("validity", value, value, session.form.validity === value, () => {
        session.form.setValidity(value);
        renderSession(root, session);
      }),
    );
  }
  form.appendChild(validityRow);

  // agreement scale (keys 1-5 are equivalent)
  const agreementRow = document.createElement("fieldset");
  agreementRow.append(legend("Your agreement with the claim (keys 1–5)"));
  AGREEMENT_LABELS.forEach((label, index) => {
    const value = index + 1;
    agreementRow.appendChild(
      radio("agreement", String(value), `${value} — ${label}`, session.form.agreement === value, () => {
        session.form.setAgreement(value);
        renderSession(root, session);
      }),
    );
  });
  form.appendChild(agreementRow);

  // severity scale with verbatim definitions as tooltips
  const severityRow = document.createElement("fieldset");
  severityRow.append(legend("How much would this claim affect the score?"));
  for (const level of SEVERITY_LEVELS) {
    const option = radio("severity", level, level, session.form.severity === level, () => {
      session.form.setSeverity(level as Severity);
      renderSession(root, session);
    });
    option.title = SEVERITY_DEFINITIONS[level];
    severityRow.appendChild(option);
  }
  form.appendChild(severityRow);

  const submit = document.createElement("button");
  submit.type = "submit";
  submit.textContent = "Submit judgment";
  submit.disabled = !session.canSubmit;
  form.appendChild(submit);
  root.appendChild(form);
}

function legend(text: string): HTMLLegendElement {
  const el = document.createElement("legend");
  el.textContent = text;
  return el;
}

function radio(
  name: string,
  value: string,
  label: string,
  checked: boolean,
  onChange: () => void,
): HTMLLabelElement {
  const wrap = document.createElement("label");
  const input = document.createElement("input");
  input.type = "radio";
  input.name = name;
  input.value = value;
  input.checked = checked;
  input.addEventListener("change", onChange);
  wrap.append(input, document.createTextNode(` ${label}`));
  return wrap;
}

export function mount(root: HTMLElement, serviceUrl: string, annotatorToken: string): AnnotationSession {
  const session = new AnnotationSession(
    new AnnotationApi(serviceUrl, annotatorToken),
    annotatorToken,
  );
  document.addEventListener("keydown", (event) => {
    if (session.handleKey(event.key)) renderSession(root, session);
  });
  void session.start().then(() => renderSession(root, session));
  return session;
}
