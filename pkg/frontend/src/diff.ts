// Minimal line diff (LCS) for the editor's change view.

export interface DiffLine {
  kind: "same" | "added" | "removed";
  text: string;
}

export function lineDiff(before: string, after: string): DiffLine[] {
  const a = before.split("\n");
  const b = after.split("\n");
  const m = a.length;
  const n = b.length;
  // LCS table; inputs are spec-sized (hundreds of lines), so O(mn) is fine
  const lcs: number[][] = Array.from({ length: m + 1 }, () => new Array(n + 1).fill(0));
  for (let i = m - 1; i >= 0; i--) {
    for (let j = n - 1; j >= 0; j--) {
      lcs[i][j] = a[i] === b[j] ? lcs[i + 1][j + 1] + 1 : Math.max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }
  const out: DiffLine[] = [];
  let i = 0;
  let j = 0;
  while (i < m && j < n) {
    if (a[i] === b[j]) {
      out.push({ kind: "same", text: a[i] });
      i++;
      j++;
    } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
      out.push({ kind: "removed", text: a[i] });
      i++;
    } else {
      out.push({ kind: "added", text: b[j] });
      j++;
    }
  }
  for (; i < m; i++) out.push({ kind: "removed", text: a[i] });
  for (; j < n; j++) out.push({ kind: "added", text: b[j] });
  return out;
}

export function changedOnly(diff: DiffLine[], context = 1): DiffLine[] {
  const keep = new Set<number>();
  diff.forEach((line, idx) => {
    if (line.kind !== "same") {
      for (let c = Math.max(0, idx - context); c <= Math.min(diff.length - 1, idx + context); c++) {
        keep.add(c);
      }
    }
  });
  return diff.filter((_, idx) => keep.has(idx));
}
