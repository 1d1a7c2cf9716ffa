/** CLI: lensdelay-figures --kind <kind> --in <csv> --out <svg> */

import { FIGURE_KINDS, FigureKind, render } from "./figures.js";

function usage(): never {
  console.error(
    `usage: lensdelay-figures --kind <${FIGURE_KINDS.join("|")}> --in <csv> --out <svg>`,
  );
  process.exit(2);
}

export function main(argv: string[]): number {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    if (!argv[i].startsWith("--") || i + 1 >= argv.length) usage();
    args.set(argv[i].slice(2), argv[i + 1]);
  }
  const kind = args.get("kind");
  const input = args.get("in");
  const output = args.get("out");
  if (!kind || !input || !output) usage();
  if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
    console.error(`unknown figure kind '${kind}'`);
    return 2;
  }
  render({ kind: kind as FigureKind, input, output });
  console.log(`wrote ${output}`);
  return 0;
}

if (process.argv[1] && import.meta.url.endsWith(process.argv[1].split("/").pop()!)) {
  process.exit(main(process.argv.slice(2)));
}
