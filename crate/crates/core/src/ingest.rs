//! Source reading: record TSV files, whole-text files and LaTeX removal.

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: expected `id<TAB>text`")]
    MissingTab { path: PathBuf, line: usize },
    #[error("{path}:{line}: duplicate record id `{id}`")]
    DuplicateId { path: PathBuf, line: usize, id: String },
}

/// One abstract of a record-organized source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentRecord {
    pub id: String,
    pub text: String,
}

/// Text with every LaTeX construct removed, split into lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CleanText {
    pub lines: Vec<String>,
}

impl CleanText {
    pub fn is_empty(&self) -> bool {
        self.lines.iter().all(|l| l.trim().is_empty())
    }
}

/// Output buffer that turns deleted spans into at most one separating space.
struct Stripped {
    out: String,
    pending_gap: bool,
}

impl Stripped {
    fn push(&mut self, c: char) {
        if self.pending_gap && !c.is_whitespace() && self.out.chars().last().is_some_and(|p| !p.is_whitespace()) {
            self.out.push(' ');
        }
        self.pending_gap = false;
        self.out.push(c);
    }

    fn gap(&mut self) {
        self.pending_gap = true;
    }
}

/// Removes math (`$…$`, `$$…$$`), control words, control symbols and braces
/// from one line.
///
/// A removed math span or control word becomes a single space when it sat
/// between two non-space characters, and disappears otherwise. A `$` or `$$`
/// without a closing delimiter on the same line removes the rest of the line.
/// Control symbols such as `\"` and braces vanish without a trace so that
/// `Schr\"{o}dinger` stays one word.
pub fn strip_latex_line(line: &str) -> String {
    let chars: Vec<char> = line.chars().collect();
    let mut s = Stripped {
        out: String::with_capacity(line.len()),
        pending_gap: false,
    };
    let mut i = 0;
    while i < chars.len() {
        match chars[i] {
            '$' => {
                let display = chars.get(i + 1) == Some(&'$');
                let open = if display { 2 } else { 1 };
                let close = if display {
                    (i + 2..chars.len().saturating_sub(1)).find(|&j| chars[j] == '$' && chars[j + 1] == '$')
                } else {
                    (i + 1..chars.len()).find(|&j| chars[j] == '$')
                };
                i = match close {
                    Some(j) => j + open,
                    None => chars.len(),
                };
                s.gap();
            }
            '\\' => match chars.get(i + 1) {
                Some(c) if c.is_ascii_alphabetic() => {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_alphabetic() {
                        i += 1;
                    }
                    s.gap();
                }
                Some(_) => i += 2,
                None => i += 1,
            },
            '{' | '}' => i += 1,
            c => {
                s.push(c);
                i += 1;
            }
        }
    }
    s.out
}

/// Strips LaTeX from every line of `raw`. Math spans never continue past a
/// line end.
pub fn strip_latex(raw: &str) -> CleanText {
    CleanText {
        lines: raw.lines().map(strip_latex_line).collect(),
    }
}

/// Reads a `id<TAB>text` record file line by line.
pub struct RecordReader<R> {
    path: PathBuf,
    lines: std::iter::Enumerate<std::io::Lines<R>>,
    seen: HashSet<String>,
}

impl<R: BufRead> RecordReader<R> {
    pub fn new(reader: R, path: impl Into<PathBuf>) -> Self {
        RecordReader {
            path: path.into(),
            lines: reader.lines().enumerate(),
            seen: HashSet::new(),
        }
    }
}

impl<R: BufRead> Iterator for RecordReader<R> {
    type Item = Result<DocumentRecord, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let (i, line) = self.lines.next()?;
            let line_no = i + 1;
            let line = match line {
                Ok(line) => line,
                Err(source) => {
                    return Some(Err(IngestError::Io {
                        path: self.path.clone(),
                        source,
                    }))
                }
            };
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.is_empty() {
                continue;
            }
            let Some((id, text)) = line.split_once('\t') else {
                return Some(Err(IngestError::MissingTab {
                    path: self.path.clone(),
                    line: line_no,
                }));
            };
            if !self.seen.insert(id.to_string()) {
                return Some(Err(IngestError::DuplicateId {
                    path: self.path.clone(),
                    line: line_no,
                    id: id.to_string(),
                }));
            }
            return Some(Ok(DocumentRecord {
                id: id.to_string(),
                text: text.to_string(),
            }));
        }
    }
}

/// Streams the records of a TSV file in file order.
pub fn parse_records(path: &Path) -> Result<RecordReader<BufReader<File>>, IngestError> {
    let file = File::open(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(RecordReader::new(BufReader::new(file), path))
}

/// Reads a whole file as a single text and strips its LaTeX.
pub fn read_corpus(path: &Path) -> Result<CleanText, IngestError> {
    let raw = fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(strip_latex(&raw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Cursor;

    /// Independent reference: a single leftmost-first regex scan that marks
    /// gap-producing deletions with NUL, followed by gap resolution.
    fn reference_strip(line: &str) -> String {
        let re = regex::Regex::new(
            r"\$\$.*?\$\$|\$\$.*|\$[^$]*\$|\$.*|\\[A-Za-z]+|\\[^A-Za-z]?|[{}]",
        )
        .unwrap();
        let marked = re.replace_all(line, |caps: &regex::Captures| {
            let m = &caps[0];
            if m.starts_with('$') || (m.len() > 1 && m.as_bytes()[1].is_ascii_alphabetic()) {
                "\0".to_string()
            } else {
                String::new()
            }
        });
        let chars: Vec<char> = marked.chars().collect();
        let mut out = String::new();
        let mut i = 0;
        while i < chars.len() {
            if chars[i] == '\0' {
                let start = i;
                while i < chars.len() && chars[i] == '\0' {
                    i += 1;
                }
                let before = if start == 0 { None } else { out.chars().last() };
                let after = chars.get(i);
                if let (Some(b), Some(a)) = (before, after) {
                    if !b.is_whitespace() && !a.is_whitespace() {
                        out.push(' ');
                    }
                }
            } else {
                out.push(chars[i]);
                i += 1;
            }
        }
        out
    }

    #[test]
    fn removes_formula_spans_keeps_prose() {
        let raw = r"fulfilling the conditions $$\frac{\partial^2}{\partial x^2} f(2x + 2y) \geq \phi(x, y)$$
 where $(X, +)$ is an abelian group. The same is done for a real inner product space X with $\dim X \geq 3$ and the conditions";
        let clean = strip_latex(raw);
        assert_eq!(clean.lines[0], "fulfilling the conditions ");
        assert_eq!(
            clean.lines[1],
            " where  is an abelian group. The same is done for a real inner product space X with  and the conditions"
        );
    }

    #[test]
    fn identity_without_math() {
        assert_eq!(strip_latex("no math here").lines, ["no math here"]);
    }

    #[test]
    fn hand_traced_spans() {
        assert_eq!(strip_latex_line("$a+b$ x $c$"), " x ");
        assert_eq!(reference_strip("$a+b$ x $c$"), " x ");
        assert_eq!(strip_latex_line("a$x$b"), "a b");
        assert_eq!(strip_latex_line("open $x + y"), "open ");
        assert_eq!(strip_latex_line("open $$x $ y"), "open ");
        assert_eq!(strip_latex_line(r#"Schr\"{o}dinger \emph{operator}"#), "Schrodinger operator");
        assert_eq!(strip_latex_line(r"costs \$5"), "costs 5");
    }

    #[test]
    fn spans_do_not_cross_lines() {
        let clean = strip_latex("a $x\nb $y$ c");
        assert_eq!(clean.lines, ["a ", "b  c"]);
    }

    #[test]
    fn records() {
        let input = "d1\tWe study rigidity.\r\nd2\t\n\nd3\tthird\n";
        let recs: Vec<_> = RecordReader::new(Cursor::new(input), "mem").collect::<Result<_, _>>().unwrap();
        let ids: Vec<&str> = recs.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["d1", "d2", "d3"]);
        assert_eq!(recs[0].text, "We study rigidity.");
        assert_eq!(recs[1].text, "");
    }

    #[test]
    fn record_errors() {
        let mut it = RecordReader::new(Cursor::new("d1\tok\nbroken line\n"), "mem");
        assert!(it.next().unwrap().is_ok());
        match it.next().unwrap() {
            Err(IngestError::MissingTab { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let mut it = RecordReader::new(Cursor::new("d1\ta\nd1\tb\n"), "mem");
        assert!(it.next().unwrap().is_ok());
        assert!(matches!(it.next().unwrap(), Err(IngestError::DuplicateId { .. })));
    }

    #[test]
    fn empty_record_file() {
        assert_eq!(RecordReader::new(Cursor::new(""), "mem").count(), 0);
    }

    proptest! {
        #[test]
        fn matches_reference(line in r"[ab $\\{}x.\-]{0,30}") {
            prop_assert_eq!(strip_latex_line(&line), reference_strip(&line));
        }

        #[test]
        fn idempotent_and_clean(line in r"[a-z $\\{}()^_+]{0,40}") {
            let once = strip_latex_line(&line);
            prop_assert_eq!(strip_latex_line(&once), once.clone());
            let has_markup = once.contains(['$', '\\', '{', '}']);
            prop_assert!(!has_markup);
        }

        #[test]
        fn only_input_characters_or_spaces(line in r"[a-zA-Z0-9 $\\{},.]{0,40}") {
            let out = strip_latex_line(&line);
            for c in out.chars() {
                prop_assert!(c == ' ' || line.contains(c));
            }
        }
    }
}
