use std::fmt;

use crate::simplicial::CellId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    /// Holds on every level that the truncation allows checking, but some
    /// required level lies above it.
    Partial,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Partial => "partial",
        }
    }

    /// Fails dominates partial, partial dominates holds.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
            (Verdict::Partial, _) | (_, Verdict::Partial) => Verdict::Partial,
            _ => Verdict::Holds,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Cells exhibiting a failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub level: usize,
    pub cells: Vec<CellId>,
    pub note: String,
}

impl Witness {
    pub fn new(level: usize, cells: Vec<CellId>, note: impl Into<String>) -> Self {
        Self {
            level,
            cells,
            note: note.into(),
        }
    }
}

/// Outcome of a check. Aggregate checks keep their parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub subject: String,
    pub condition: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub depth: usize,
    pub notes: Vec<String>,
    pub parts: Vec<CheckReport>,
}

/// Witness lists are cut at this length; the count of dropped ones is noted.
pub const MAX_WITNESSES: usize = 8;

impl CheckReport {
    pub fn new(subject: impl Into<String>, condition: impl Into<String>, depth: usize) -> Self {
        Self {
            subject: subject.into(),
            condition: condition.into(),
            verdict: Verdict::Holds,
            witnesses: Vec::new(),
            depth,
            notes: Vec::new(),
            parts: Vec::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn fails(&self) -> bool {
        self.verdict == Verdict::Fails
    }

    pub fn fail(&mut self, w: Witness) {
        self.verdict = Verdict::Fails;
        self.witnesses.push(w);
    }

    pub fn partial(&mut self, note: impl Into<String>) {
        self.verdict = self.verdict.and(Verdict::Partial);
        self.notes.push(note.into());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Adds a sub-check and folds its verdict in; witnesses of failing
    /// parts are lifted so that a failing aggregate always carries some.
    pub fn push_part(&mut self, part: CheckReport) {
        self.verdict = self.verdict.and(part.verdict);
        if part.fails() && self.witnesses.len() < MAX_WITNESSES {
            for w in &part.witnesses {
                if self.witnesses.len() == MAX_WITNESSES {
                    break;
                }
                self.witnesses.push(Witness {
                    level: w.level,
                    cells: w.cells.clone(),
                    note: format!("{}: {}", part.condition, w.note),
                });
            }
        }
        self.parts.push(part);
    }

    pub(crate) fn cap_witnesses(&mut self, dropped: usize) {
        if dropped > 0 {
            self.notes.push(format!("{dropped} further witnesses omitted"));
        }
    }

    pub fn summary(&self) -> String {
        format!("{} {} on {}", self.condition, self.verdict, self.subject)
    }
}

/// Collects witnesses up to [`MAX_WITNESSES`], counting the rest.
#[derive(Default)]
pub(crate) struct WitnessSink {
    pub items: Vec<Witness>,
    pub dropped: usize,
}

impl WitnessSink {
    pub fn push(&mut self, w: Witness) {
        if self.items.len() < MAX_WITNESSES {
            self.items.push(w);
        } else {
            self.dropped += 1;
        }
    }

    pub fn into_report(self, report: &mut CheckReport) {
        let dropped = self.dropped;
        for w in self.items {
            report.fail(w);
        }
        report.cap_witnesses(dropped);
    }
}
