//! The plain-text scenario format.
//!
//! A file is a sequence of `.`-terminated facts in the style of the apx
//! format; `%` starts a comment that runs to the end of the line.
//!
//! ```text
//! arg(a). att(a,b). topic(a).
//! agent(0,preferred). agent(1,grounded).          % abstract scenario
//! value(av). val(a,av). pref(0,av,bv). semantics(stage).  % value-based
//! ```
//!
//! `agent` facts and `semantics`/`value`/`val`/`pref` facts describe the two
//! scenario styles and cannot be mixed in one file.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::af::{ArgFramework, ArgId, Extension, SemanticsKind};
use crate::agreement::AgreementScenario;
use crate::error::{Error, Result};
use crate::vaf::{Preference, ValueFramework, ValueId, ValueScenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Fact {
    Arg(ArgId),
    Att(ArgId, ArgId),
    Topic(ArgId),
    Value(ValueId),
    Val(ArgId, ValueId),
    /// `pref(i,u,w)`: agent `i` prefers `u` over `w`.
    Pref(usize, ValueId, ValueId),
    Agent(usize, SemanticsKind),
    Semantics(SemanticsKind),
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::Arg(a) => write!(f, "arg({a})."),
            Fact::Att(a, b) => write!(f, "att({a},{b})."),
            Fact::Topic(a) => write!(f, "topic({a})."),
            Fact::Value(v) => write!(f, "value({v})."),
            Fact::Val(a, v) => write!(f, "val({a},{v})."),
            Fact::Pref(i, u, w) => write!(f, "pref({i},{u},{w})."),
            Fact::Agent(i, s) => write!(f, "agent({i},{s})."),
            Fact::Semantics(s) => write!(f, "semantics({s})."),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Statement {
    pub fact: Fact,
    pub pos: Position,
}

/// Parsed facts in source order. Equality ignores source positions.
#[derive(Debug, Clone, Default)]
pub struct ScenarioDocument {
    statements: Vec<Statement>,
}

impl PartialEq for ScenarioDocument {
    fn eq(&self, other: &Self) -> bool {
        self.statements.len() == other.statements.len()
            && self
                .statements
                .iter()
                .zip(&other.statements)
                .all(|(a, b)| a.fact == b.fact)
    }
}

impl Eq for ScenarioDocument {}

/// What a document describes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scenario {
    /// Only arguments, attacks and possibly a topic.
    Framework(ArgFramework),
    Abstract(AgreementScenario),
    Value(ValueScenario),
}

impl Scenario {
    pub fn af(&self) -> &ArgFramework {
        match self {
            Scenario::Framework(af) => af,
            Scenario::Abstract(s) => s.af(),
            Scenario::Value(s) => s.vaf().af(),
        }
    }
}

fn located(pos: Position, inner: Error) -> Error {
    Error::Located {
        line: pos.line,
        column: pos.column,
        inner: Box::new(inner),
    }
}

fn parse_error(pos: Position, message: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Open,
    Close,
    Comma,
    Dot,
}

/// Tokens plus the position just past the last character.
fn lex(text: &str) -> Result<(Vec<(Tok, Position)>, Position)> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Position { line, column };
        let mut advance = |c: char| {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        match c {
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    advance(c);
                    chars.next();
                }
            }
            c if c.is_whitespace() => {
                advance(c);
                chars.next();
            }
            '(' | ')' | ',' | '.' => {
                advance(c);
                chars.next();
                out.push((
                    match c {
                        '(' => Tok::Open,
                        ')' => Tok::Close,
                        ',' => Tok::Comma,
                        _ => Tok::Dot,
                    },
                    pos,
                ));
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if !(c.is_ascii_alphanumeric() || c == '_') {
                        break;
                    }
                    s.push(c);
                    advance(c);
                    chars.next();
                }
                out.push((Tok::Ident(s), pos));
            }
            other => return Err(parse_error(pos, format!("unexpected character {other:?}"))),
        }
    }
    Ok((out, Position { line, column }))
}

fn describe(t: Option<&(Tok, Position)>) -> String {
    match t {
        None => "end of input".into(),
        Some((Tok::Ident(s), _)) => format!("identifier {s:?}"),
        Some((Tok::Open, _)) => "'('".into(),
        Some((Tok::Close, _)) => "')'".into(),
        Some((Tok::Comma, _)) => "','".into(),
        Some((Tok::Dot, _)) => "'.'".into(),
    }
}

fn index(s: &str, pos: Position) -> Result<usize> {
    if !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_error(pos, format!("expected an agent index, found {s:?}")));
    }
    s.parse()
        .map_err(|_| parse_error(pos, format!("agent index {s} is too large")))
}

fn semantics(s: &str, pos: Position) -> Result<SemanticsKind> {
    s.parse().map_err(|_| {
        parse_error(
            pos,
            format!("unknown semantics {s:?}; expected complete, preferred, grounded, naive or stage"),
        )
    })
}

fn build_fact(name: &str, args: &[(String, Position)], pos: Position) -> Result<Fact> {
    let arity = match name {
        "arg" | "topic" | "value" | "semantics" => 1,
        "att" | "val" | "agent" => 2,
        "pref" => 3,
        _ => return Err(parse_error(pos, format!("unknown predicate {name:?}"))),
    };
    if args.len() != arity {
        return Err(parse_error(
            pos,
            format!("{name} takes {arity} argument(s), found {}", args.len()),
        ));
    }
    let arg = |k: usize| ArgId::new(&args[k].0).map_err(|e| located(args[k].1, e));
    let value = |k: usize| ValueId::new(&args[k].0).map_err(|e| located(args[k].1, e));
    Ok(match name {
        "arg" => Fact::Arg(arg(0)?),
        "att" => Fact::Att(arg(0)?, arg(1)?),
        "topic" => Fact::Topic(arg(0)?),
        "value" => Fact::Value(value(0)?),
        "val" => Fact::Val(arg(0)?, value(1)?),
        "pref" => Fact::Pref(index(&args[0].0, args[0].1)?, value(1)?, value(2)?),
        "agent" => Fact::Agent(index(&args[0].0, args[0].1)?, semantics(&args[1].0, args[1].1)?),
        "semantics" => Fact::Semantics(semantics(&args[0].0, args[0].1)?),
        _ => unreachable!("arity table covers every predicate"),
    })
}

/// Parses a scenario file; duplicate facts are rejected.
pub fn parse_scenario(text: &str) -> Result<ScenarioDocument> {
    let (toks, end) = lex(text)?;
    let mut it = toks.iter().peekable();
    let mut statements = Vec::new();
    let mut seen: HashSet<Fact> = HashSet::new();
    while let Some((tok, pos)) = it.next() {
        let Tok::Ident(name) = tok else {
            return Err(parse_error(*pos, format!("expected a predicate, found {}", describe(Some(&(tok.clone(), *pos))))));
        };
        match it.next() {
            Some((Tok::Open, _)) => {}
            other => return Err(parse_error(other.map_or(end, |t| t.1), format!("expected '(', found {}", describe(other)))),
        }
        let mut args = Vec::new();
        loop {
            match it.next() {
                Some((Tok::Ident(s), p)) => args.push((s.clone(), *p)),
                other => {
                    return Err(parse_error(other.map_or(end, |t| t.1), format!("expected an identifier, found {}", describe(other))))
                }
            }
            match it.next() {
                Some((Tok::Comma, _)) => continue,
                Some((Tok::Close, _)) => break,
                other => {
                    return Err(parse_error(other.map_or(end, |t| t.1), format!("expected ',' or ')', found {}", describe(other))))
                }
            }
        }
        match it.next() {
            Some((Tok::Dot, _)) => {}
            other => return Err(parse_error(other.map_or(end, |t| t.1), format!("expected '.', found {}", describe(other)))),
        }
        let fact = build_fact(name, &args, *pos)?;
        if !seen.insert(fact.clone()) {
            return Err(parse_error(*pos, format!("duplicate fact {fact}")));
        }
        statements.push(Statement { fact, pos: *pos });
    }
    Ok(ScenarioDocument { statements })
}

impl ScenarioDocument {
    /// Builds a document from facts; positions count statements as lines.
    pub fn from_facts(facts: impl IntoIterator<Item = Fact>) -> Self {
        ScenarioDocument {
            statements: facts
                .into_iter()
                .enumerate()
                .map(|(i, fact)| Statement {
                    fact,
                    pos: Position { line: i + 1, column: 1 },
                })
                .collect(),
        }
    }

    pub fn statements(&self) -> &[Statement] {
        &self.statements
    }

    pub fn facts(&self) -> impl Iterator<Item = &Fact> {
        self.statements.iter().map(|s| &s.fact)
    }

    /// One fact per line, in document order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.statements {
            out.push_str(&s.fact.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_framework(af: &ArgFramework) -> Self {
        ScenarioDocument::from_facts(framework_facts(af))
    }

    pub fn from_agreement(scn: &AgreementScenario) -> Self {
        let mut facts = framework_facts(scn.af());
        facts.extend(scn.topic().iter().cloned().map(Fact::Topic));
        facts.extend(scn.agents().iter().enumerate().map(|(i, &s)| Fact::Agent(i, s)));
        ScenarioDocument::from_facts(facts)
    }

    pub fn from_value(scn: &ValueScenario) -> Self {
        let vaf = scn.vaf();
        let mut facts = framework_facts(vaf.af());
        facts.extend(scn.topic().iter().cloned().map(Fact::Topic));
        facts.extend(vaf.values().iter().cloned().map(Fact::Value));
        facts.extend(vaf.valuation().iter().map(|(a, v)| Fact::Val(a.clone(), v.clone())));
        for (i, p) in vaf.prefs().iter().enumerate() {
            facts.extend(p.iter().map(|(u, w)| Fact::Pref(i, u.clone(), w.clone())));
        }
        facts.push(Fact::Semantics(scn.semantics()));
        ScenarioDocument::from_facts(facts)
    }

    fn first(&self, pred: impl Fn(&Fact) -> bool) -> Option<Position> {
        self.statements.iter().find(|s| pred(&s.fact)).map(|s| s.pos)
    }

    /// The framework made of the `arg` and `att` facts.
    pub fn framework(&self) -> Result<ArgFramework> {
        let mut args = BTreeSet::new();
        for s in &self.statements {
            if let Fact::Arg(a) = &s.fact {
                args.insert(a.clone());
            }
        }
        let mut attacks = Vec::new();
        for s in &self.statements {
            if let Fact::Att(a, b) = &s.fact {
                for x in [a, b] {
                    if !args.contains(x) {
                        return Err(located(s.pos, Error::UnknownArgument(x.to_string())));
                    }
                }
                attacks.push((a.clone(), b.clone()));
            }
        }
        ArgFramework::new(args, attacks)
    }

    fn topic(&self, af: &ArgFramework) -> Result<Extension> {
        let mut topic = Extension::new();
        for s in &self.statements {
            if let Fact::Topic(a) = &s.fact {
                if !af.contains(a) {
                    return Err(located(s.pos, Error::UnknownArgument(a.to_string())));
                }
                topic.insert(a.clone());
            }
        }
        Ok(topic)
    }

    /// Interprets the document as a bare framework, an abstract scenario or
    /// a value-based scenario.
    pub fn scenario(&self) -> Result<Scenario> {
        let abstract_at = self.first(|f| matches!(f, Fact::Agent(..)));
        let value_at = self.first(|f| {
            matches!(f, Fact::Semantics(_) | Fact::Value(_) | Fact::Val(..) | Fact::Pref(..))
        });
        let af = self.framework()?;
        let topic = self.topic(&af)?;
        match (abstract_at, value_at) {
            (Some(a), Some(v)) => Err(parse_error(
                a.max(v),
                "agent facts cannot be mixed with semantics/value/val/pref facts",
            )),
            (None, None) => Ok(Scenario::Framework(af)),
            (Some(_), None) => self.agreement(af, topic).map(Scenario::Abstract),
            (None, Some(_)) => self.value(af, topic).map(Scenario::Value),
        }
    }

    fn agreement(&self, af: ArgFramework, topic: Extension) -> Result<AgreementScenario> {
        let mut agents: BTreeMap<usize, (SemanticsKind, Position)> = BTreeMap::new();
        for s in &self.statements {
            if let Fact::Agent(i, k) = &s.fact {
                if agents.insert(*i, (*k, s.pos)).is_some() {
                    return Err(parse_error(s.pos, format!("agent {i} is declared twice")));
                }
            }
        }
        for (expected, (&i, &(_, pos))) in agents.iter().enumerate() {
            if i != expected {
                return Err(parse_error(pos, format!("agent indices must be 0..n without gaps; agent {expected} is missing")));
            }
        }
        AgreementScenario::new(af, topic, agents.values().map(|(k, _)| *k).collect())
    }

    fn value(&self, af: ArgFramework, topic: Extension) -> Result<ValueScenario> {
        let mut sem = None;
        let mut values = BTreeSet::new();
        for s in &self.statements {
            match &s.fact {
                Fact::Semantics(k) => {
                    if sem.is_some() {
                        return Err(parse_error(s.pos, "semantics is declared twice"));
                    }
                    sem = Some(*k);
                }
                Fact::Value(v) => {
                    values.insert(v.clone());
                }
                _ => {}
            }
        }
        let Some(sem) = sem else {
            let pos = self.first(|f| matches!(f, Fact::Value(_) | Fact::Val(..) | Fact::Pref(..)));
            return Err(parse_error(
                pos.unwrap_or(Position { line: 1, column: 1 }),
                "value-based scenario without a semantics(...) fact",
            ));
        };
        let mut val = Vec::new();
        let mut mapped: BTreeMap<ArgId, Position> = BTreeMap::new();
        let mut prefs: Vec<Preference> = Vec::new();
        for s in &self.statements {
            match &s.fact {
                Fact::Val(a, v) => {
                    if !af.contains(a) {
                        return Err(located(s.pos, Error::UnknownArgument(a.to_string())));
                    }
                    if !values.contains(v) {
                        return Err(located(s.pos, Error::UnknownValue(v.to_string())));
                    }
                    if mapped.insert(a.clone(), s.pos).is_some() {
                        return Err(parse_error(s.pos, format!("argument {a} has more than one value")));
                    }
                    val.push((a.clone(), v.clone()));
                }
                Fact::Pref(i, u, w) => {
                    for x in [u, w] {
                        if !values.contains(x) {
                            return Err(located(s.pos, Error::UnknownValue(x.to_string())));
                        }
                    }
                    if prefs.len() <= *i {
                        prefs.resize(*i + 1, Preference::new());
                    }
                    prefs[*i].insert((u.clone(), w.clone()));
                }
                _ => {}
            }
        }
        if prefs.is_empty() {
            prefs.push(Preference::new());
        }
        let vaf = ValueFramework::new(af, values, val, prefs).map_err(|e| {
            let pos = self.value_error_position(&e);
            located(pos, e)
        })?;
        ValueScenario::new(vaf, topic, sem)
    }

    /// Best-effort source position for a value-framework validation error.
    fn value_error_position(&self, e: &Error) -> Position {
        let found = match e {
            Error::SelfAttack(name) => {
                self.first(|f| matches!(f, Fact::Att(a, b) if a == b && a.as_str() == name))
            }
            Error::PreferenceReflexive { agent, .. }
            | Error::PreferenceSymmetric { agent, .. }
            | Error::PreferenceIntransitive { agent, .. } => {
                self.first(|f| matches!(f, Fact::Pref(i, ..) if i == agent))
            }
            _ => self.first(|f| matches!(f, Fact::Val(..) | Fact::Value(_))),
        };
        found.unwrap_or(Position { line: 1, column: 1 })
    }
}

fn framework_facts(af: &ArgFramework) -> Vec<Fact> {
    let mut facts: Vec<Fact> = af.args().iter().cloned().map(Fact::Arg).collect();
    facts.extend(af.attacks().iter().map(|(a, b)| Fact::Att(a.clone(), b.clone())));
    facts
}
