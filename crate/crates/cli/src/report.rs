//! Command reports: prose for people and a `[report]` key-value block with a
//! fixed key order for scripts.

use std::fmt::Write as _;

use kanfib::{CheckReport, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    /// Prose followed by the structured block.
    Text,
    /// The structured block only.
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Partial,
    Ok,
    Error,
    UsageError,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Partial => "partial",
            Status::Ok => "ok",
            Status::Error => "error",
            Status::UsageError => "usage-error",
        }
    }

    /// 0 for holds and success, 2 for usage and parse errors, 1 otherwise.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Holds | Status::Ok => 0,
            Status::UsageError => 2,
            Status::Fails | Status::Partial | Status::Error => 1,
        }
    }
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Holds => Status::Holds,
            Verdict::Fails => Status::Fails,
            Verdict::Partial => Status::Partial,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub check: Option<CheckReport>,
    /// Command results, in insertion order.
    pub fields: Vec<(String, String)>,
    pub prose: Vec<String>,
    pub error: Option<(String, String)>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            status: Status::Ok,
            check: None,
            fields: Vec::new(),
            prose: Vec::new(),
            error: None,
        }
    }

    pub fn of_check(command: impl Into<String>, check: CheckReport) -> Self {
        let mut r = Self::new(command);
        r.status = check.verdict.into();
        r.check = Some(check);
        r
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn say(&mut self, line: impl Into<String>) -> &mut Self {
        self.prose.push(line.into());
        self
    }

    /// Marks a failed construction. Errors carrying a check report or a
    /// witness keep them.
    pub fn fail_with(&mut self, e: &kanfib::Error) -> &mut Self {
        self.status = Status::Error;
        self.error = Some((e.kind().into(), e.to_string()));
        match e {
            kanfib::Error::NotAFibration(c) | kanfib::Error::NotAHypercover(c) => {
                self.check = Some((**c).clone());
            }
            kanfib::Error::Not2IsotropyFree { vertex, count } => {
                let mut c = CheckReport::new("simplicial set", "2-isotropy free", 2);
                c.fail(kanfib::Witness::new(
                    0,
                    vec![*vertex],
                    format!("{count} 2-cells with all faces degenerate"),
                ));
                self.check = Some(c);
            }
            _ => {}
        }
        self
    }

    pub fn usage_error(command: impl Into<String>, kind: &str, message: impl Into<String>) -> Self {
        let mut r = Self::new(command);
        r.status = Status::UsageError;
        r.error = Some((kind.into(), message.into()));
        r
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn render(&self, format: OutputFormat, verbosity: u8) -> String {
        let mut out = String::new();
        if format == OutputFormat::Text {
            self.write_prose(&mut out, verbosity);
            out.push('\n');
        }
        self.write_structured(&mut out);
        out
    }

    fn write_prose(&self, out: &mut String, verbosity: u8) {
        if let Some((kind, message)) = &self.error {
            let _ = writeln!(out, "{}: {kind}: {message}", self.command);
        }
        if let Some(c) = &self.check {
            write_check(out, c, 0, verbosity);
        }
        for line in &self.prose {
            let _ = writeln!(out, "{line}");
        }
        if self.error.is_none() && self.check.is_none() && self.prose.is_empty() {
            let _ = writeln!(out, "{}: {}", self.command, self.status.as_str());
        }
    }

    fn write_structured(&self, out: &mut String) {
        out.push_str("[report]\n");
        let mut kv = |k: &str, v: &str| {
            let _ = writeln!(out, "{k} = {}", one_line(v));
        };
        kv("command", &self.command);
        kv("status", self.status.as_str());
        kv("exit", &self.exit_code().to_string());
        if let Some(c) = &self.check {
            kv("subject", &c.subject);
            kv("condition", &c.condition);
            kv("verdict", c.verdict.as_str());
            kv("depth", &c.depth.to_string());
            kv("witnesses", &c.witnesses.len().to_string());
            for (i, w) in c.witnesses.iter().enumerate() {
                kv(&format!("witness.{i}.level"), &w.level.to_string());
                kv(&format!("witness.{i}.cells"), &cells(&w.cells));
                kv(&format!("witness.{i}.note"), &w.note);
            }
            kv("notes", &c.notes.len().to_string());
            for (i, n) in c.notes.iter().enumerate() {
                kv(&format!("note.{i}"), n);
            }
            kv("parts", &c.parts.len().to_string());
            for (i, p) in c.parts.iter().enumerate() {
                kv(&format!("part.{i}"), &format!("{} {}", p.condition, p.verdict));
            }
        }
        for (k, v) in &self.fields {
            kv(k, v);
        }
        if let Some((kind, message)) = &self.error {
            kv("error.kind", kind);
            kv("error.message", message);
        }
    }
}

fn cells(cs: &[usize]) -> String {
    cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

fn one_line(s: &str) -> String {
    s.replace('\n', "\\n")
}

fn write_check(out: &mut String, c: &CheckReport, indent: usize, verbosity: u8) {
    let pad = "  ".repeat(indent);
    let _ = writeln!(out, "{pad}{} (depth {})", c.summary(), c.depth);
    if verbosity == 0 {
        return;
    }
    for w in &c.witnesses {
        let _ = writeln!(out, "{pad}  witness at level {}: cells [{}] {}", w.level, cells(&w.cells), w.note);
    }
    for n in &c.notes {
        let _ = writeln!(out, "{pad}  note: {n}");
    }
    for p in &c.parts {
        if verbosity >= 2 {
            write_check(out, p, indent + 1, verbosity);
        } else {
            let _ = writeln!(out, "{pad}  - {} {}", p.condition, p.verdict);
        }
    }
}
