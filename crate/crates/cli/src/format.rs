//! The `.kf` text format: line-oriented named blocks.
//!
//! ```text
//! # comment
//! [group C2]
//! elements: e a
//! mul 0: 0 1
//! mul 1: 1 0
//!
//! [sset BC2] N=2
//! levels = 1 2 4
//! face 1 0: 0->0 1->0
//! ```
//!
//! Block kinds are `group`, `groupoid`, `crossed_module`, `sset`, `action`
//! and `map`. Header attributes `key=value` and body lines `key = value`
//! are interchangeable. Names and labels escape whitespace and the
//! characters `%#:=[]` as `%XX`; the empty string is written `%`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use kanfib::{CrossedModule, FiniteGroup, FiniteGroupoid, Functor, MapKind, SimplicialMap, SimplicialSet, StrictAction};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: expected {expected}")]
    Parse { line: usize, column: usize, expected: String },
    #[error("block {block}: {source}")]
    Validation {
        block: String,
        #[source]
        source: kanfib::Error,
    },
}

impl FormatError {
    fn at(line: usize, column: usize, expected: impl Into<String>) -> Self {
        FormatError::Parse {
            line,
            column,
            expected: expected.into(),
        }
    }
}

type Parsed<T> = std::result::Result<T, FormatError>;

/// A parsed block. Actions and maps name the blocks they are built on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Group(FiniteGroup),
    Groupoid(FiniteGroupoid),
    CrossedModule(CrossedModule),
    Set(Arc<SimplicialSet>),
    Action {
        groupoid: String,
        acting: String,
        action: StrictAction,
    },
    Map {
        from: String,
        to: String,
        map: SimplicialMap,
    },
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Group(_) => "group",
            Value::Groupoid(_) => "groupoid",
            Value::CrossedModule(_) => "crossed_module",
            Value::Set(_) => "sset",
            Value::Action { .. } => "action",
            Value::Map { .. } => "map",
        }
    }
}

/// Named blocks, kept sorted by name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    blocks: BTreeMap<String, Value>,
}

impl Document {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.blocks.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.blocks.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Inserts or replaces a block.
    pub fn insert(&mut self, name: impl Into<String>, value: Value) {
        self.blocks.insert(name.into(), value);
    }

    pub fn insert_set(&mut self, name: &str, set: Arc<SimplicialSet>) {
        self.insert(name, Value::Set(set));
    }

    /// Inserts an action with its groupoid and acting group or crossed
    /// module as `<name>_groupoid` and `<name>_group` or `<name>_xm`.
    pub fn insert_action(&mut self, name: &str, action: StrictAction) {
        let groupoid = format!("{name}_groupoid");
        self.insert(&groupoid, Value::Groupoid(action.groupoid().clone()));
        let acting = match action.crossed_module() {
            Some(xm) => {
                let n = format!("{name}_xm");
                self.insert(&n, Value::CrossedModule(xm.clone()));
                n
            }
            None => {
                let n = format!("{name}_group");
                self.insert(&n, Value::Group(action.group().clone()));
                n
            }
        };
        self.insert(
            name,
            Value::Action {
                groupoid,
                acting,
                action,
            },
        );
    }

    /// Inserts a map between two sets already in the document.
    pub fn insert_map(&mut self, name: &str, from: &str, to: &str, map: SimplicialMap) {
        self.insert(
            name,
            Value::Map {
                from: from.into(),
                to: to.into(),
                map,
            },
        );
    }
}

// ---------------------------------------------------------------- escaping

const SPECIAL: &str = " \t\r\n%#:=[]";

pub fn escape(s: &str) -> String {
    if s.is_empty() {
        return "%".into();
    }
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if SPECIAL.contains(c) {
            let _ = write!(out, "%{:02X}", c as u32);
        } else {
            out.push(c);
        }
    }
    out
}

fn unescape(t: &Tok) -> Parsed<String> {
    if t.text == "%" {
        return Ok(String::new());
    }
    let mut out = String::new();
    let mut chars = t.text.chars();
    while let Some(c) = chars.next() {
        if c != '%' {
            out.push(c);
            continue;
        }
        let hex: String = chars.by_ref().take(2).collect();
        let code = u8::from_str_radix(&hex, 16)
            .ok()
            .filter(|&b| b.is_ascii())
            .ok_or_else(|| FormatError::at(t.line, t.col, "a %XX escape"))?;
        out.push(code as char);
    }
    Ok(out)
}

// ---------------------------------------------------------------- lexing

#[derive(Clone, Debug)]
struct Tok {
    text: String,
    line: usize,
    col: usize,
}

#[derive(Clone, Debug)]
struct Entry {
    line: usize,
    col: usize,
    key: Vec<Tok>,
    vals: Vec<Tok>,
}

impl Entry {
    fn key_str(&self) -> String {
        self.key.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" ")
    }

    fn end(&self) -> (usize, usize) {
        match self.vals.last() {
            Some(t) => (t.line, t.col + t.text.chars().count()),
            None => (self.line, self.col),
        }
    }

    fn single(&self, what: &str) -> Parsed<&Tok> {
        match self.vals.as_slice() {
            [t] => Ok(t),
            [] => {
                let (l, c) = self.end();
                Err(FormatError::at(l, c, what))
            }
            [_, t, ..] => Err(FormatError::at(t.line, t.col, "end of line")),
        }
    }
}

#[derive(Debug)]
struct RawBlock {
    kind: Tok,
    name: Tok,
    entries: Vec<Entry>,
}

fn tokens(s: &str, line: usize, offset: usize) -> Vec<Tok> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let chars: Vec<char> = s.chars().collect();
    for (i, &c) in chars.iter().chain(std::iter::once(&' ')).enumerate() {
        if c.is_whitespace() {
            if let Some(b) = start.take() {
                out.push(Tok {
                    text: chars[b..i].iter().collect(),
                    line,
                    col: offset + b + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    out
}

/// Splits `key sep values` at the first `:` or `=`.
fn entry(text: &str, line: usize, offset: usize) -> Parsed<Entry> {
    let chars: Vec<char> = text.chars().collect();
    let Some(sep) = chars.iter().position(|&c| c == ':' || c == '=') else {
        return Err(FormatError::at(line, offset + 1, "`key: values` or `key = value`"));
    };
    let key: String = chars[..sep].iter().collect();
    let vals: String = chars[sep + 1..].iter().collect();
    let key = tokens(&key, line, offset);
    if key.is_empty() {
        return Err(FormatError::at(line, offset + 1, "a key"));
    }
    Ok(Entry {
        line,
        col: key[0].col,
        key,
        vals: tokens(&vals, line, offset + sep + 1),
    })
}

fn lex(text: &str) -> Parsed<Vec<RawBlock>> {
    let mut blocks: Vec<RawBlock> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = body.chars().count() - trimmed.chars().count();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(close) = rest.find(']') else {
                return Err(FormatError::at(line, indent + 1 + rest.chars().count() + 1, "`]`"));
            };
            let inner = tokens(&rest[..close], line, indent + 1);
            let [kind, name] = <[Tok; 2]>::try_from(inner).map_err(|v| {
                let col = v.get(2).or(v.last()).map_or(indent + 2, |t| t.col);
                FormatError::at(line, col, "`[kind name]`")
            })?;
            let after = &rest[close + 1..];
            let after_off = indent + 1 + rest[..close].chars().count() + 1;
            let mut entries = Vec::new();
            for t in tokens(after, line, after_off) {
                let Some((k, v)) = t.text.split_once('=') else {
                    return Err(FormatError::at(line, t.col, "`key=value` header attribute"));
                };
                let klen = k.chars().count();
                entries.push(Entry {
                    line,
                    col: t.col,
                    key: vec![Tok {
                        text: k.into(),
                        line,
                        col: t.col,
                    }],
                    vals: vec![Tok {
                        text: v.into(),
                        line,
                        col: t.col + klen + 1,
                    }],
                });
            }
            blocks.push(RawBlock { kind, name, entries });
            continue;
        }
        let Some(block) = blocks.last_mut() else {
            return Err(FormatError::at(line, indent + 1, "a `[kind name]` header"));
        };
        block.entries.push(entry(trimmed, line, indent)?);
    }
    Ok(blocks)
}

// ---------------------------------------------------------------- fields

fn number(t: &Tok) -> Parsed<usize> {
    t.text
        .parse()
        .map_err(|_| FormatError::at(t.line, t.col, "a non-negative integer"))
}

fn numbers(toks: &[Tok]) -> Parsed<Vec<usize>> {
    toks.iter().map(number).collect()
}

/// `a->b` pairs; the arrow may stand apart from its operands.
fn pairs(e: &Entry) -> Parsed<Vec<(usize, usize)>> {
    let mut words: Vec<Tok> = Vec::new();
    for t in &e.vals {
        let text = t.text.replace('→', "->");
        let mut rest = text.as_str();
        let mut col = t.col;
        while let Some(i) = rest.find("->") {
            if i > 0 {
                words.push(Tok {
                    text: rest[..i].into(),
                    line: t.line,
                    col,
                });
            }
            words.push(Tok {
                text: "->".into(),
                line: t.line,
                col: col + rest[..i].chars().count(),
            });
            col += rest[..i].chars().count() + 2;
            rest = &rest[i + 2..];
        }
        if !rest.is_empty() {
            words.push(Tok {
                text: rest.into(),
                line: t.line,
                col,
            });
        }
    }
    let mut out = Vec::new();
    let mut it = words.chunks(3);
    for chunk in &mut it {
        match chunk {
            [a, arrow, b] if arrow.text == "->" => out.push((number(a)?, number(b)?)),
            [a, arrow, ..] if a.text != "->" => return Err(FormatError::at(arrow.line, arrow.col, "`->`")),
            [t, ..] => return Err(FormatError::at(t.line, t.col, "`a->b`")),
            [] => unreachable!(),
        }
    }
    Ok(out)
}

/// A total table from pairs covering `0..count` once each.
fn table(e: &Entry, count: usize) -> Parsed<Vec<usize>> {
    let mut out = vec![usize::MAX; count];
    for (k, (a, b)) in pairs(e)?.into_iter().enumerate() {
        let t = &e.vals[0];
        if a >= count {
            return Err(FormatError::at(t.line, t.col, format!("sources below {count} (pair {k})")));
        }
        if out[a] != usize::MAX {
            return Err(FormatError::at(t.line, t.col, format!("one image for {a}")));
        }
        out[a] = b;
    }
    if let Some(a) = out.iter().position(|&b| b == usize::MAX) {
        let (l, c) = e.end();
        return Err(FormatError::at(l, c, format!("an image for {a}")));
    }
    Ok(out)
}

fn key_number(e: &Entry, k: usize) -> Parsed<usize> {
    match e.key.get(k) {
        Some(t) => number(t),
        None => Err(FormatError::at(e.line, e.col, format!("`{} <index>`", e.key_str()))),
    }
}

fn expect_key_len(e: &Entry, len: usize) -> Parsed<()> {
    match e.key.get(len) {
        None if e.key.len() == len => Ok(()),
        Some(t) => Err(FormatError::at(t.line, t.col, "`:`")),
        None => Err(FormatError::at(e.line, e.col, format!("{len} key words"))),
    }
}

fn unknown(e: &Entry, expected: &str) -> FormatError {
    FormatError::at(e.line, e.col, expected)
}

fn validation(block: &Tok) -> impl Fn(kanfib::Error) -> FormatError + '_ {
    move |source| FormatError::Validation {
        block: block.text.clone(),
        source,
    }
}

/// Entries whose first key word is `prefix`, with it removed.
fn sub(entries: &[Entry], prefix: &str) -> Vec<Entry> {
    entries
        .iter()
        .filter(|e| e.key[0].text == prefix && e.key.len() > 1)
        .map(|e| Entry {
            key: e.key[1..].to_vec(),
            col: e.key[1].col,
            ..e.clone()
        })
        .collect()
}

fn missing(b: &Tok, what: &str) -> FormatError {
    FormatError::at(b.line, b.col, format!("a `{what}` line in this block"))
}

// ---------------------------------------------------------------- blocks

fn parse_group(name: &Tok, entries: &[Entry]) -> Parsed<FiniteGroup> {
    let mut names: Option<Vec<String>> = None;
    let mut rows: BTreeMap<usize, (&Entry, Vec<usize>)> = BTreeMap::new();
    for e in entries {
        match e.key[0].text.as_str() {
            "elements" => {
                expect_key_len(e, 1)?;
                names = Some(e.vals.iter().map(unescape).collect::<Parsed<_>>()?);
            }
            "mul" => {
                expect_key_len(e, 2)?;
                let a = key_number(e, 1)?;
                if rows.insert(a, (e, numbers(&e.vals)?)).is_some() {
                    return Err(unknown(e, format!("one `mul {a}` line").as_str()));
                }
            }
            _ => return Err(unknown(e, "`elements` or `mul <a>`")),
        }
    }
    let names = names.ok_or_else(|| missing(name, "elements"))?;
    let n = names.len();
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        let (e, row) = rows.remove(&a).ok_or_else(|| missing(name, &format!("mul {a}")))?;
        if row.len() != n {
            let (l, c) = e.end();
            return Err(FormatError::at(l, c, format!("{n} entries")));
        }
        table.extend(row);
    }
    if let Some((a, (e, _))) = rows.into_iter().next() {
        return Err(unknown(e, &format!("row indices below {n}, not {a}")));
    }
    FiniteGroup::new(names, table).map_err(validation(name))
}

fn parse_groupoid(name: &Tok, entries: &[Entry]) -> Parsed<FiniteGroupoid> {
    let mut objects: Option<Vec<String>> = None;
    let mut arrows: BTreeMap<usize, (usize, usize, String)> = BTreeMap::new();
    let mut comps: Vec<(usize, usize, usize)> = Vec::new();
    let mut inv: Option<Vec<usize>> = None;
    let mut unit: Option<Vec<usize>> = None;
    for e in entries {
        match e.key[0].text.as_str() {
            "objects" => {
                expect_key_len(e, 1)?;
                objects = Some(e.vals.iter().map(unescape).collect::<Parsed<_>>()?);
            }
            "arrow" => {
                expect_key_len(e, 2)?;
                let a = key_number(e, 1)?;
                let (s, t, n) = match e.vals.as_slice() {
                    [s, t] => (number(s)?, number(t)?, a.to_string()),
                    [s, t, n] => (number(s)?, number(t)?, unescape(n)?),
                    _ => {
                        let (l, c) = e.end();
                        return Err(FormatError::at(l, c, "`<src> <tgt> [name]`"));
                    }
                };
                if arrows.insert(a, (s, t, n)).is_some() {
                    return Err(unknown(e, &format!("one `arrow {a}` line")));
                }
            }
            "compose" if e.key.len() == 1 => {
                // compose: a b -> c
                let v = &e.vals;
                let ok = v.len() == 4 && (v[2].text == "->" || v[2].text == "→");
                if !ok {
                    let (l, c) = e.end();
                    return Err(FormatError::at(l, c, "`<a> <b> -> <c>`"));
                }
                comps.push((number(&v[0])?, number(&v[1])?, number(&v[3])?));
            }
            "compose" => {
                // compose a: b->c ...
                expect_key_len(e, 2)?;
                let a = key_number(e, 1)?;
                comps.extend(pairs(e)?.into_iter().map(|(b, c)| (a, b, c)));
            }
            "inv" => {
                expect_key_len(e, 1)?;
                inv = Some(numbers(&e.vals)?);
            }
            "unit" => {
                expect_key_len(e, 1)?;
                unit = Some(numbers(&e.vals)?);
            }
            _ => return Err(unknown(e, "`objects`, `arrow <id>`, `compose`, `inv` or `unit`")),
        }
    }
    let objects = objects.ok_or_else(|| missing(name, "objects"))?;
    let na = arrows.len();
    if let Some((&a, _)) = arrows.iter().enumerate().find(|(i, (a, _))| i != *a).map(|(_, x)| x) {
        return Err(missing(name, &format!("arrow {}", a.min(na))));
    }
    let (mut src, mut tgt, mut names) = (Vec::new(), Vec::new(), Vec::new());
    for (_, (s, t, n)) in arrows {
        src.push(s);
        tgt.push(t);
        names.push(n);
    }
    let bad = |s: String| FormatError::Validation {
        block: name.text.clone(),
        source: kanfib::Error::InvalidGroupoid(s),
    };
    if src.iter().chain(&tgt).any(|&x| x >= objects.len()) {
        return Err(bad("arrow endpoint out of range".into()));
    }
    let mut comp = vec![usize::MAX; na * na];
    for (a, b, c) in comps {
        if a >= na || b >= na || c >= na {
            return Err(bad(format!("composite {a} {b} -> {c} out of range")));
        }
        if tgt[a] != src[b] {
            return Err(bad(format!("{a} and {b} are not composable")));
        }
        if comp[a * na + b] != usize::MAX {
            return Err(bad(format!("two composites for {a} {b}")));
        }
        comp[a * na + b] = c;
    }
    for a in 0..na {
        for b in 0..na {
            if tgt[a] == src[b] && comp[a * na + b] == usize::MAX {
                return Err(FormatError::Validation {
                    block: name.text.clone(),
                    source: kanfib::Error::MissingTableEntry(format!("composite of {a} and {b}")),
                });
            }
        }
    }
    let g = match (inv, unit) {
        (Some(inv), Some(unit)) => FiniteGroupoid::from_tables(objects, names, src, tgt, comp, inv, unit),
        (None, None) => FiniteGroupoid::from_compose(objects.len(), src, tgt, |a, b| comp[a * na + b])
            .and_then(|g| g.with_names(objects, names)),
        (None, Some(_)) => return Err(missing(name, "inv")),
        (Some(_), None) => return Err(missing(name, "unit")),
    };
    g.map_err(validation(name))
}

fn parse_crossed_module(name: &Tok, entries: &[Entry]) -> Parsed<CrossedModule> {
    let h = parse_group(name, &sub(entries, "H"))?;
    let g = parse_group(name, &sub(entries, "G"))?;
    let mut bnd = None;
    let mut act: BTreeMap<usize, (&Entry, Vec<usize>)> = BTreeMap::new();
    for e in entries {
        match e.key[0].text.as_str() {
            "H" | "G" if e.key.len() > 1 => {}
            "bnd" => {
                expect_key_len(e, 1)?;
                bnd = Some(numbers(&e.vals)?);
            }
            "act" => {
                expect_key_len(e, 2)?;
                let a = key_number(e, 1)?;
                if act.insert(a, (e, numbers(&e.vals)?)).is_some() {
                    return Err(unknown(e, &format!("one `act {a}` line")));
                }
            }
            _ => return Err(unknown(e, "`H ...`, `G ...`, `bnd` or `act <g>`")),
        }
    }
    let bnd = bnd.ok_or_else(|| missing(name, "bnd"))?;
    let mut table = Vec::new();
    for a in g.elements() {
        let (e, row) = act.remove(&a).ok_or_else(|| missing(name, &format!("act {a}")))?;
        if row.len() != h.order() {
            let (l, c) = e.end();
            return Err(FormatError::at(l, c, format!("{} entries", h.order())));
        }
        table.extend(row);
    }
    if let Some((_, (e, _))) = act.into_iter().next() {
        return Err(unknown(e, &format!("`act` indices below {}", g.order())));
    }
    CrossedModule::new(h, g, bnd, table).map_err(validation(name))
}

fn parse_sset(name: &Tok, entries: &[Entry]) -> Parsed<SimplicialSet> {
    let mut top: Option<usize> = None;
    let mut counts: Option<Vec<usize>> = None;
    let mut cells: BTreeMap<usize, usize> = BTreeMap::new();
    let mut faces: Vec<(&Entry, usize, usize)> = Vec::new();
    let mut degens: Vec<(&Entry, usize, usize)> = Vec::new();
    let mut labels: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for e in entries {
        match e.key[0].text.as_str() {
            "N" => {
                expect_key_len(e, 1)?;
                top = Some(number(e.single("the top level")?)?);
            }
            "levels" => {
                expect_key_len(e, 1)?;
                counts = Some(numbers(&e.vals)?);
            }
            "cells" => {
                expect_key_len(e, 2)?;
                let n = key_number(e, 1)?;
                let ids = numbers(&e.vals)?;
                if let Some((k, t)) = ids.iter().zip(&e.vals).enumerate().find(|(k, (id, _))| *k != **id) {
                    return Err(FormatError::at(t.1.line, t.1.col, format!("cell id {k}")));
                }
                cells.insert(n, ids.len());
            }
            "face" | "degen" => {
                expect_key_len(e, 3)?;
                let (n, i) = (key_number(e, 1)?, key_number(e, 2)?);
                if e.key[0].text == "face" { &mut faces } else { &mut degens }.push((e, n, i));
            }
            "label" => {
                expect_key_len(e, 2)?;
                let n = key_number(e, 1)?;
                labels.insert(n, e.vals.iter().map(unescape).collect::<Parsed<_>>()?);
            }
            _ => return Err(unknown(e, "`N`, `levels`, `cells <n>`, `face <n> <i>`, `degen <n> <i>` or `label <n>`")),
        }
    }
    let counts = match counts {
        Some(c) => c,
        None if !cells.is_empty() => {
            let top = *cells.keys().last().expect("nonempty");
            (0..=top)
                .map(|n| cells.get(&n).copied().ok_or_else(|| missing(name, &format!("cells {n}"))))
                .collect::<Parsed<_>>()?
        }
        None => return Err(missing(name, "levels")),
    };
    let top = top.unwrap_or(counts.len().saturating_sub(1));
    if counts.len() != top + 1 {
        return Err(FormatError::at(name.line, name.col, format!("{} level sizes for N = {top}", top + 1)));
    }
    let mut face_tables: Vec<Vec<Vec<usize>>> = (0..=top).map(|n| vec![Vec::new(); n + 1]).collect();
    let mut degen_tables: Vec<Vec<Vec<usize>>> = (0..=top).map(|n| vec![Vec::new(); n + 1]).collect();
    for (tables, list, hi, what) in [(&mut face_tables, &faces, 1, "face"), (&mut degen_tables, &degens, 0, "degen")] {
        for &(e, n, i) in list {
            let ok_level = if what == "face" { (hi..=top).contains(&n) } else { n < top };
            if !ok_level || i > n {
                return Err(FormatError::at(e.key[1].line, e.key[1].col, format!("a valid `{what} <n> <i>` index")));
            }
            if !tables[n][i].is_empty() {
                return Err(unknown(e, &format!("one `{what} {n} {i}` line")));
            }
            tables[n][i] = table(e, counts[n])?;
        }
    }
    // Levels without cells need no lines.
    for n in 0..=top {
        if counts[n] == 0 {
            continue;
        }
        for i in 0..=n {
            if n > 0 && face_tables[n][i].is_empty() {
                return Err(missing(name, &format!("face {n} {i}")));
            }
            if n < top && degen_tables[n][i].is_empty() {
                return Err(missing(name, &format!("degen {n} {i}")));
            }
        }
    }
    let set = SimplicialSet::build(top, counts, face_tables, degen_tables).map_err(validation(name))?;
    if labels.is_empty() {
        return Ok(set);
    }
    let all = (0..=top).map(|n| labels.remove(&n).unwrap_or_default()).collect();
    if let Some(&n) = labels.keys().next() {
        return Err(missing(name, &format!("level {n} at most {top}")));
    }
    set.with_labels(all).map_err(validation(name))
}

/// A header or body `key = value` reference.
fn reference<'a>(entries: &'a [Entry], key: &str) -> Parsed<Option<&'a Tok>> {
    let found: Vec<&Entry> = entries.iter().filter(|e| e.key_str() == key).collect();
    match found.as_slice() {
        [] => Ok(None),
        [e] => Ok(Some(e.single(&format!("a block name after `{key}`"))?)),
        [_, e, ..] => Err(unknown(e, &format!("one `{key}`"))),
    }
}

fn lookup<'a>(doc: &'a BTreeMap<String, Value>, t: &Tok) -> Parsed<(String, &'a Value)> {
    let name = unescape(t)?;
    match doc.get(&name) {
        Some(v) => Ok((name, v)),
        None => Err(FormatError::at(t.line, t.col, format!("a block named `{name}`"))),
    }
}

fn parse_action(name: &Tok, entries: &[Entry], doc: &BTreeMap<String, Value>) -> Parsed<Value> {
    let gt = reference(entries, "groupoid")?.ok_or_else(|| missing(name, "groupoid"))?;
    let (groupoid, gv) = lookup(doc, gt)?;
    let Value::Groupoid(x) = gv else {
        return Err(FormatError::at(gt.line, gt.col, "a groupoid block"));
    };
    let acting_tok = match (reference(entries, "group")?, reference(entries, "crossed_module")?) {
        (Some(t), None) | (None, Some(t)) => t,
        (None, None) => return Err(missing(name, "group")),
        (Some(_), Some(t)) => return Err(FormatError::at(t.line, t.col, "only one of `group` and `crossed_module`")),
    };
    let (acting, av) = lookup(doc, acting_tok)?;
    let order = match av {
        Value::Group(g) => g.order(),
        Value::CrossedModule(xm) => xm.g().order(),
        _ => return Err(FormatError::at(acting_tok.line, acting_tok.col, "a group or crossed_module block")),
    };
    let mut objects: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut arrows: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut theta: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in entries {
        match e.key[0].text.as_str() {
            "groupoid" | "group" | "crossed_module" if e.key.len() == 1 => {}
            "phi" => {
                expect_key_len(e, 3)?;
                let g = key_number(e, 1)?;
                let into = match e.key[2].text.as_str() {
                    "objects" => &mut objects,
                    "arrows" => &mut arrows,
                    _ => return Err(FormatError::at(e.key[2].line, e.key[2].col, "`objects` or `arrows`")),
                };
                if into.insert(g, numbers(&e.vals)?).is_some() {
                    return Err(unknown(e, &format!("one `{}` line", e.key_str())));
                }
            }
            "theta" => {
                expect_key_len(e, 2)?;
                let h = key_number(e, 1)?;
                if theta.insert(h, numbers(&e.vals)?).is_some() {
                    return Err(unknown(e, &format!("one `theta {h}` line")));
                }
            }
            _ => return Err(unknown(e, "`groupoid`, `group`, `crossed_module`, `phi <g> objects|arrows` or `theta <h>`")),
        }
    }
    let mut phi = Vec::with_capacity(order);
    for g in 0..order {
        phi.push(Functor {
            objects: objects.remove(&g).ok_or_else(|| missing(name, &format!("phi {g} objects")))?,
            arrows: arrows.remove(&g).ok_or_else(|| missing(name, &format!("phi {g} arrows")))?,
        });
    }
    if let Some(&g) = objects.keys().chain(arrows.keys()).next() {
        return Err(missing(name, &format!("phi indices below {order}, not {g}")));
    }
    let action = match av {
        Value::Group(g) => {
            if let Some(&h) = theta.keys().next() {
                return Err(missing(name, &format!("crossed_module for `theta {h}`")));
            }
            StrictAction::of_group(x.clone(), g.clone(), phi)
        }
        Value::CrossedModule(xm) => {
            let t = (0..xm.h().order())
                .map(|h| theta.remove(&h).ok_or_else(|| missing(name, &format!("theta {h}"))))
                .collect::<Parsed<Vec<_>>>()?;
            StrictAction::of_crossed_module(x.clone(), xm.clone(), phi, t)
        }
        _ => unreachable!(),
    }
    .map_err(validation(name))?;
    Ok(Value::Action {
        groupoid,
        acting,
        action,
    })
}

fn parse_map(name: &Tok, entries: &[Entry], doc: &BTreeMap<String, Value>) -> Parsed<Value> {
    let set_of = |key: &str| -> Parsed<(String, Arc<SimplicialSet>)> {
        let t = reference(entries, key)?.ok_or_else(|| missing(name, key))?;
        match lookup(doc, t)? {
            (n, Value::Set(s)) => Ok((n, s.clone())),
            _ => Err(FormatError::at(t.line, t.col, "an sset block")),
        }
    };
    let (from, source) = set_of("from")?;
    let (to, target) = set_of("to")?;
    let mut kind = MapKind::Full;
    let mut levels: BTreeMap<usize, &Entry> = BTreeMap::new();
    for e in entries {
        match e.key[0].text.as_str() {
            "from" | "to" if e.key.len() == 1 => {}
            "kind" => {
                expect_key_len(e, 1)?;
                let t = e.single("`full` or `face-only`")?;
                kind = match t.text.as_str() {
                    "full" => MapKind::Full,
                    "face-only" => MapKind::FaceOnly,
                    _ => return Err(FormatError::at(t.line, t.col, "`full` or `face-only`")),
                };
            }
            "level" => {
                expect_key_len(e, 2)?;
                let n = key_number(e, 1)?;
                if levels.insert(n, e).is_some() {
                    return Err(unknown(e, &format!("one `level {n}` line")));
                }
            }
            _ => return Err(unknown(e, "`from`, `to`, `kind` or `level <n>`")),
        }
    }
    let top = source.top().min(target.top());
    let mut tables = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let e = levels.remove(&n).ok_or_else(|| missing(name, &format!("level {n}")))?;
        tables.push(table(e, source.count(n))?);
    }
    if let Some((_, e)) = levels.into_iter().next() {
        return Err(unknown(e, &format!("levels at most {top}")));
    }
    let map = SimplicialMap::new(source, target, tables, kind).map_err(validation(name))?;
    Ok(Value::Map { from, to, map })
}

/// Parses and validates a document. References may point forward.
pub fn parse(text: &str) -> Parsed<Document> {
    let raw = lex(text)?;
    let mut doc: BTreeMap<String, Value> = BTreeMap::new();
    let mut names = std::collections::BTreeSet::new();
    for b in &raw {
        if !["group", "groupoid", "crossed_module", "sset", "action", "map"].contains(&b.kind.text.as_str()) {
            return Err(FormatError::at(
                b.kind.line,
                b.kind.col,
                "one of group, groupoid, crossed_module, sset, action, map",
            ));
        }
        if !names.insert(unescape(&b.name)?) {
            return Err(FormatError::at(b.name.line, b.name.col, "a block name not used before"));
        }
    }
    // Plain values first, then actions, then maps.
    for pass in 0..3 {
        for b in &raw {
            let kind = b.kind.text.as_str();
            let want = match kind {
                "action" => 1,
                "map" => 2,
                _ => 0,
            };
            if want != pass {
                continue;
            }
            let e = &b.entries;
            let value = match kind {
                "group" => Value::Group(parse_group(&b.name, e)?),
                "groupoid" => Value::Groupoid(parse_groupoid(&b.name, e)?),
                "crossed_module" => Value::CrossedModule(parse_crossed_module(&b.name, e)?),
                "sset" => Value::Set(Arc::new(parse_sset(&b.name, e)?)),
                "action" => parse_action(&b.name, e, &doc)?,
                _ => parse_map(&b.name, e, &doc)?,
            };
            doc.insert(unescape(&b.name)?, value);
        }
    }
    Ok(Document { blocks: doc })
}

// ---------------------------------------------------------------- output

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn join_names<'a>(xs: impl IntoIterator<Item = &'a String>) -> String {
    join(xs.into_iter().map(|s| escape(s)))
}

fn arrows_line(xs: &[usize]) -> String {
    join(xs.iter().enumerate().map(|(a, b)| format!("{a}->{b}")))
}

fn write_group(out: &mut String, prefix: &str, g: &FiniteGroup) {
    let _ = writeln!(out, "{prefix}elements: {}", join_names(g.names()));
    for a in g.elements() {
        let _ = writeln!(out, "{prefix}mul {a}: {}", join(g.elements().map(|b| g.mul(a, b))));
    }
}

fn write_groupoid(out: &mut String, g: &FiniteGroupoid) {
    let _ = writeln!(out, "objects: {}", join_names(g.object_names()));
    for a in 0..g.arrow_count() {
        let _ = writeln!(out, "arrow {a}: {} {} {}", g.src(a), g.tgt(a), escape(g.arrow_name(a)));
    }
    for a in 0..g.arrow_count() {
        let row: Vec<String> = (0..g.arrow_count())
            .filter_map(|b| g.compose(a, b).map(|c| format!("{b}->{c}")))
            .collect();
        let _ = writeln!(out, "compose {a}: {}", row.join(" "));
    }
    let _ = writeln!(out, "inv: {}", join((0..g.arrow_count()).map(|a| g.inv(a))));
    let _ = writeln!(out, "unit: {}", join((0..g.object_count()).map(|x| g.unit(x))));
}

fn write_sset(out: &mut String, x: &SimplicialSet) {
    let _ = writeln!(out, "levels = {}", join(x.counts()));
    for n in 1..=x.top() {
        for i in 0..=n {
            let _ = writeln!(
                out,
                "face {n} {i}: {}",
                arrows_line(&(0..x.count(n)).map(|c| x.face(n, i, c)).collect::<Vec<_>>())
            );
        }
    }
    for n in 0..x.top() {
        for i in 0..=n {
            let _ = writeln!(
                out,
                "degen {n} {i}: {}",
                arrows_line(&(0..x.count(n)).map(|c| x.degen(n, i, c)).collect::<Vec<_>>())
            );
        }
    }
    for n in 0..=x.top() {
        if !x.labels(n).is_empty() {
            let _ = writeln!(out, "label {n}: {}", join_names(x.labels(n)));
        }
    }
}

/// The canonical text: blocks in name order, cells in id order.
pub fn serialize(doc: &Document) -> String {
    let mut out = String::new();
    for (k, (name, value)) in doc.blocks.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        let name = escape(name);
        match value {
            Value::Group(g) => {
                let _ = writeln!(out, "[group {name}]");
                write_group(&mut out, "", g);
            }
            Value::Groupoid(g) => {
                let _ = writeln!(out, "[groupoid {name}]");
                write_groupoid(&mut out, g);
            }
            Value::CrossedModule(xm) => {
                let _ = writeln!(out, "[crossed_module {name}]");
                write_group(&mut out, "H ", xm.h());
                write_group(&mut out, "G ", xm.g());
                let _ = writeln!(out, "bnd: {}", join(xm.bnd_table()));
                let nh = xm.h().order();
                for a in xm.g().elements() {
                    let _ = writeln!(out, "act {a}: {}", join(&xm.act_table()[a * nh..(a + 1) * nh]));
                }
            }
            Value::Set(x) => {
                let _ = writeln!(out, "[sset {name}] N={}", x.top());
                write_sset(&mut out, x);
            }
            Value::Action {
                groupoid,
                acting,
                action,
            } => {
                let key = if action.crossed_module().is_some() { "crossed_module" } else { "group" };
                let _ = writeln!(
                    out,
                    "[action {name}] groupoid={} {key}={}",
                    escape(groupoid),
                    escape(acting)
                );
                for (g, f) in action.phis().iter().enumerate() {
                    let _ = writeln!(out, "phi {g} objects: {}", join(&f.objects));
                    let _ = writeln!(out, "phi {g} arrows: {}", join(&f.arrows));
                }
                for (h, t) in action.thetas().iter().enumerate() {
                    let _ = writeln!(out, "theta {h}: {}", join(t));
                }
            }
            Value::Map { from, to, map } => {
                let _ = writeln!(out, "[map {name}] from={} to={}", escape(from), escape(to));
                let kind = match map.kind() {
                    MapKind::Full => "full",
                    MapKind::FaceOnly => "face-only",
                };
                let _ = writeln!(out, "kind = {kind}");
                for (n, t) in map.tables().iter().enumerate() {
                    let _ = writeln!(out, "level {n}: {}", arrows_line(t));
                }
            }
        }
    }
    out
}
