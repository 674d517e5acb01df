//! Contrasts as deterministic object-to-object maps.
//!
//! A contrast is an ordered list of rewrite rules over a schema: partitions
//! of an atomic inventory (optionally guarded), insertions between adjacent
//! token pairs, and guarded deletions. Applying the map to every object of
//! a corpus yields the corpus "without" the contrast; two values are in the
//! same equivalence class iff the map sends them to the same value.
//!
//! Partitions on a nested atomic type (say phonemes inside syllables inside
//! words) apply by inheritance: every atomic occurrence of that type is
//! relabeled wherever it sits in the value tree.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::sync::Arc;

use crate::corpus::{CorpusSource, TokenStreamCorpus, WeightedLexicon};
use crate::error::{Error, Result};
use crate::schema::{strip_comment, valid_token, Schema, TypeDef, TypeRef, Value};

/// Partition of an atomic inventory. Only non-singleton classes are listed;
/// unlisted tokens are implicit singletons. Each listed class is relabeled
/// to its members sorted lexicographically and joined with `+`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub atomic_type: String,
    classes: Vec<BTreeSet<String>>,
    label_of: BTreeMap<String, String>,
}

impl Partition {
    pub fn new(
        schema: &Schema,
        atomic_type: impl Into<String>,
        classes: Vec<BTreeSet<String>>,
    ) -> Result<Partition> {
        let atomic_type = atomic_type.into();
        let inventory = schema.atomic_inventory(&atomic_type)?;
        let mut label_of = BTreeMap::new();
        for class in &classes {
            if class.len() < 2 {
                return Err(Error::invalid("partition class needs at least 2 members"));
            }
            let label = class.iter().cloned().collect::<Vec<_>>().join("+");
            for tok in class {
                if !inventory.iter().any(|t| t == tok) {
                    return Err(Error::invalid(format!(
                        "token `{tok}` not in inventory of `{atomic_type}`"
                    )));
                }
                if label_of.insert(tok.clone(), label.clone()).is_some() {
                    return Err(Error::invalid(format!(
                        "overlapping partition classes at token `{tok}`"
                    )));
                }
            }
        }
        Ok(Partition {
            atomic_type,
            classes,
            label_of,
        })
    }

    /// Merger of exactly two tokens.
    pub fn pair(schema: &Schema, atomic_type: &str, x: &str, y: &str) -> Result<Partition> {
        if x == y {
            return Err(Error::invalid(format!("pair members must be distinct: `{x}`")));
        }
        let class: BTreeSet<String> = [x.to_string(), y.to_string()].into();
        Partition::new(schema, atomic_type, vec![class])
    }

    /// Single class containing the whole inventory (the full merge).
    pub fn full_merge(schema: &Schema, atomic_type: &str) -> Result<Partition> {
        let class: BTreeSet<String> = schema
            .atomic_inventory(atomic_type)?
            .iter()
            .cloned()
            .collect();
        Partition::new(schema, atomic_type, vec![class])
    }

    pub fn classes(&self) -> &[BTreeSet<String>] {
        &self.classes
    }

    /// Class label of a token; unlisted tokens map to themselves.
    pub fn label<'a>(&'a self, tok: &'a str) -> &'a str {
        self.label_of.get(tok).map(|l| l.as_str()).unwrap_or(tok)
    }

    /// True if each class of `self` is contained in some class of `other`
    /// (so `other` is coarser or equal).
    pub fn refines(&self, other: &Partition) -> bool {
        self.classes
            .iter()
            .all(|c| other.classes.iter().any(|d| c.is_subset(d)))
    }

    fn describe(&self) -> String {
        let parts: Vec<String> = self
            .classes
            .iter()
            .map(|c| format!("{{{}}}", c.iter().cloned().collect::<Vec<_>>().join(" ")))
            .collect();
        format!("partition {} : {}", self.atomic_type, parts.join(" "))
    }
}

/// One guard predicate, evaluated at an atomic occurrence against its
/// enclosing context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GuardPred {
    /// A component of the nearest enclosing composite that has this
    /// component name equals the given atomic token.
    SiblingEquals(String, String),
    /// First element of its immediately containing string.
    StringInitial,
    /// Last element of its immediately containing string.
    StringFinal,
    /// Immediate left neighbor in the containing string is one of these.
    LeftNeighborIn(BTreeSet<String>),
    /// Immediate right neighbor in the containing string is one of these.
    RightNeighborIn(BTreeSet<String>),
    /// Initial at every string level up to the outermost (e.g. word-initial
    /// position of a phoneme inside a word of syllables).
    OutermostInitial,
}

/// Conjunction of predicates; empty means unconditional.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Guard {
    pub preds: Vec<GuardPred>,
}

impl Guard {
    pub fn unconditional() -> Guard {
        Guard::default()
    }

    pub fn is_unconditional(&self) -> bool {
        self.preds.is_empty()
    }

    fn describe(&self) -> String {
        let parts: Vec<String> = self
            .preds
            .iter()
            .map(|p| match p {
                GuardPred::SiblingEquals(c, v) => format!("{c}={v}"),
                GuardPred::StringInitial => "string-initial".to_string(),
                GuardPred::StringFinal => "string-final".to_string(),
                GuardPred::OutermostInitial => "outermost-initial".to_string(),
                GuardPred::LeftNeighborIn(s) => format!(
                    "left-in {{{}}}",
                    s.iter().cloned().collect::<Vec<_>>().join(" ")
                ),
                GuardPred::RightNeighborIn(s) => format!(
                    "right-in {{{}}}",
                    s.iter().cloned().collect::<Vec<_>>().join(" ")
                ),
            })
            .collect();
        parts.join(" & ")
    }
}

/// A rewrite rule; a contrast is an ordered list of these.
#[derive(Debug, Clone, PartialEq)]
pub enum Rule {
    /// Replace each guarded occurrence of a listed token by its class label.
    Relabel { partition: Partition, guard: Guard },
    /// Insert `token` between each adjacent (after, before) pair in the host
    /// string component.
    Insert {
        token: String,
        host_type: String,
        component: String,
        after: String,
        before: String,
    },
    /// Remove each guarded occurrence of `token` from the host string
    /// component; emptying a string is an application error.
    Delete {
        token: String,
        host_type: String,
        component: String,
        guard: Guard,
    },
}

impl Rule {
    fn describe(&self) -> String {
        match self {
            Rule::Relabel { partition, guard } => {
                if guard.is_unconditional() {
                    partition.describe()
                } else {
                    format!("{} when {}", partition.describe(), guard.describe())
                }
            }
            Rule::Insert {
                token,
                host_type,
                component,
                after,
                before,
            } => format!("insert {token} in {host_type}.{component} after {after} before {before}"),
            Rule::Delete {
                token,
                host_type,
                component,
                guard,
            } => {
                let base = format!("delete {token} in {host_type}.{component}");
                if guard.is_unconditional() {
                    base
                } else {
                    format!("{base} when {}", guard.describe())
                }
            }
        }
    }
}

/// A validated contrast: the object type it maps, plus its rules in
/// application order.
#[derive(Debug, Clone)]
pub struct ContrastSpec {
    pub schema: Arc<Schema>,
    pub object_type: String,
    pub rules: Vec<Rule>,
}

impl ContrastSpec {
    pub fn new(schema: Arc<Schema>, object_type: impl Into<String>, rules: Vec<Rule>) -> Result<Self> {
        let object_type = object_type.into();
        schema.require(&object_type)?;
        for rule in &rules {
            validate_rule(&schema, rule)?;
        }
        Ok(ContrastSpec {
            schema,
            object_type,
            rules,
        })
    }

    /// The identity contrast (no rules).
    pub fn identity(schema: Arc<Schema>, object_type: impl Into<String>) -> Result<Self> {
        ContrastSpec::new(schema, object_type, Vec::new())
    }

    /// Same rules, retargeted to another object type of the same schema.
    pub fn for_object_type(&self, object_type: impl Into<String>) -> Result<Self> {
        ContrastSpec::new(self.schema.clone(), object_type, self.rules.clone())
    }

    /// Human-readable one-line summary, also usable as a contrast id.
    pub fn describe(&self) -> String {
        if self.rules.is_empty() {
            return "identity".to_string();
        }
        self.rules
            .iter()
            .map(|r| r.describe())
            .collect::<Vec<_>>()
            .join("; ")
    }

    /// Applies the map g to one well-typed value: rules in order, each rule
    /// in one left-to-right pass, guards and match positions read from the
    /// pre-pass value of that rule.
    pub fn apply(&self, value: &Value) -> Result<Value> {
        let ty = TypeRef::Named(self.object_type.clone());
        let mut current = value.clone();
        for rule in &self.rules {
            let mut frames = Vec::new();
            let mut path = Vec::new();
            current = apply_rule(&self.schema, rule, &ty, &current, &mut frames, &mut path)?;
        }
        Ok(current)
    }

    /// Applies the map to every value of a corpus. For lexicons, weights of
    /// values that collide post-map are summed.
    pub fn apply_to_corpus(&self, source: &CorpusSource) -> Result<CorpusSource> {
        if source.object_type() != self.object_type {
            return Err(Error::invalid(format!(
                "corpus object type `{}` does not match contrast object type `{}`",
                source.object_type(),
                self.object_type
            )));
        }
        match source {
            CorpusSource::Stream(corpus) => {
                let mut utterances = Vec::with_capacity(corpus.utterances.len());
                for utt in &corpus.utterances {
                    let mapped: Result<Vec<Value>> = utt.iter().map(|v| self.apply(v)).collect();
                    utterances.push(mapped?);
                }
                Ok(CorpusSource::Stream(TokenStreamCorpus {
                    schema: corpus.schema.clone(),
                    object_type: corpus.object_type.clone(),
                    utterances,
                }))
            }
            CorpusSource::Lexicon(lexicon) => {
                let mut out =
                    WeightedLexicon::new(lexicon.schema.clone(), lexicon.object_type.clone())?;
                for (_, value, weight) in lexicon.iter() {
                    out.add_weight(self.apply(value)?, weight)?;
                }
                Ok(CorpusSource::Lexicon(out))
            }
        }
    }
}

fn validate_guard(schema: &Schema, guard: &Guard, element_type: &str) -> Result<()> {
    let inventory = schema.atomic_inventory(element_type)?;
    for pred in &guard.preds {
        match pred {
            GuardPred::SiblingEquals(comp, tok) => {
                // some composite must carry a component of this name whose
                // atomic inventory contains the token
                let mut found = false;
                for name in schema.type_names() {
                    if let Some(TypeDef::Composite { components }) = schema.get(name) {
                        for (cname, cty) in components {
                            if cname == comp {
                                if let TypeRef::Named(t) = cty {
                                    if let Ok(inv) = schema.atomic_inventory(t) {
                                        if inv.iter().any(|x| x == tok) {
                                            found = true;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                if !found {
                    return Err(Error::invalid(format!(
                        "guard `{comp}={tok}` matches no composite component"
                    )));
                }
            }
            GuardPred::LeftNeighborIn(set) | GuardPred::RightNeighborIn(set) => {
                for tok in set {
                    if !inventory.iter().any(|x| x == tok) {
                        return Err(Error::invalid(format!(
                            "guard token `{tok}` not in inventory of `{element_type}`"
                        )));
                    }
                }
            }
            GuardPred::StringInitial | GuardPred::StringFinal | GuardPred::OutermostInitial => {}
        }
    }
    Ok(())
}

fn host_element_type(schema: &Schema, host_type: &str, component: &str) -> Result<String> {
    match schema.require(host_type)? {
        TypeDef::Composite { components } => {
            for (cname, cty) in components {
                if cname == component {
                    match cty {
                        TypeRef::StringOf(elem) if schema.is_atomic(elem) => {
                            return Ok(elem.clone())
                        }
                        _ => {
                            return Err(Error::invalid(format!(
                                "host `{host_type}.{component}` is not a string of atomic values"
                            )))
                        }
                    }
                }
            }
            Err(Error::invalid(format!(
                "type `{host_type}` has no component `{component}`"
            )))
        }
        _ => Err(Error::invalid(format!("host type `{host_type}` is not composite"))),
    }
}

fn validate_rule(schema: &Schema, rule: &Rule) -> Result<()> {
    match rule {
        Rule::Relabel { partition, guard } => {
            // partition construction already checked class shape; re-check
            // the type is still atomic in this schema
            schema.atomic_inventory(&partition.atomic_type)?;
            validate_guard(schema, guard, &partition.atomic_type)
        }
        Rule::Insert {
            token,
            host_type,
            component,
            after,
            before,
        } => {
            let elem = host_element_type(schema, host_type, component)?;
            let inv = schema.atomic_inventory(&elem)?;
            for tok in [token, after, before] {
                if !inv.iter().any(|x| x == tok) {
                    return Err(Error::invalid(format!(
                        "token `{tok}` not in inventory of `{elem}`"
                    )));
                }
            }
            Ok(())
        }
        Rule::Delete {
            token,
            host_type,
            component,
            guard,
        } => {
            let elem = host_element_type(schema, host_type, component)?;
            let inv = schema.atomic_inventory(&elem)?;
            if !inv.iter().any(|x| x == token) {
                return Err(Error::invalid(format!(
                    "token `{token}` not in inventory of `{elem}`"
                )));
            }
            validate_guard(schema, guard, &elem)
        }
    }
}

// ---------------------------------------------------------------------------
// Application

enum Frame<'a> {
    Composite {
        comps: &'a [(String, TypeRef)],
        values: &'a [Value],
    },
    Str {
        len: usize,
        index: usize,
        elems: &'a [Value],
    },
}

fn guard_holds(guard: &Guard, frames: &[Frame<'_>]) -> bool {
    guard.preds.iter().all(|p| pred_holds(p, frames))
}

fn pred_holds(pred: &GuardPred, frames: &[Frame<'_>]) -> bool {
    let innermost_str = frames.iter().rev().find_map(|f| match f {
        Frame::Str { len, index, elems } => Some((*len, *index, *elems)),
        _ => None,
    });
    match pred {
        GuardPred::SiblingEquals(comp, tok) => {
            for frame in frames.iter().rev() {
                if let Frame::Composite { comps, values } = frame {
                    if let Some(i) = comps.iter().position(|(c, _)| c == comp) {
                        return values[i] == Value::Atomic(tok.clone());
                    }
                }
            }
            false
        }
        GuardPred::StringInitial => matches!(innermost_str, Some((_, 0, _))),
        GuardPred::StringFinal => matches!(innermost_str, Some((len, i, _)) if i + 1 == len),
        GuardPred::LeftNeighborIn(set) => match innermost_str {
            Some((_, i, elems)) if i > 0 => match &elems[i - 1] {
                Value::Atomic(t) => set.contains(t),
                _ => false,
            },
            _ => false,
        },
        GuardPred::RightNeighborIn(set) => match innermost_str {
            Some((len, i, elems)) if i + 1 < len => match &elems[i + 1] {
                Value::Atomic(t) => set.contains(t),
                _ => false,
            },
            _ => false,
        },
        GuardPred::OutermostInitial => {
            let mut saw_str = false;
            for frame in frames {
                if let Frame::Str { index, .. } = frame {
                    saw_str = true;
                    if *index != 0 {
                        return false;
                    }
                }
            }
            saw_str
        }
    }
}

fn apply_rule<'a>(
    schema: &'a Schema,
    rule: &Rule,
    ty: &TypeRef,
    value: &'a Value,
    frames: &mut Vec<Frame<'a>>,
    path: &mut Vec<usize>,
) -> Result<Value> {
    match (ty, value) {
        (TypeRef::Named(name), Value::Atomic(tok)) => {
            if let Rule::Relabel { partition, guard } = rule {
                if *name == partition.atomic_type
                    && partition.label_of.contains_key(tok)
                    && guard_holds(guard, frames)
                {
                    return Ok(Value::Atomic(partition.label(tok).to_string()));
                }
            }
            Ok(value.clone())
        }
        (TypeRef::Named(name), Value::Composite(vals)) => {
            let components = match schema.get(name) {
                Some(TypeDef::Composite { components }) => components,
                _ => return Ok(value.clone()),
            };
            frames.push(Frame::Composite {
                comps: components,
                values: vals,
            });
            let mut out = Vec::with_capacity(vals.len());
            for (j, ((cname, cty), v)) in components.iter().zip(vals).enumerate() {
                path.push(j);
                let mapped = match rule {
                    Rule::Insert {
                        token,
                        host_type,
                        component,
                        after,
                        before,
                    } if host_type == name && component == cname => {
                        insert_pass(v, token, after, before)
                    }
                    Rule::Delete {
                        token,
                        host_type,
                        component,
                        guard,
                    } if host_type == name && component == cname => {
                        delete_pass(v, token, guard, frames, path)?
                    }
                    _ => apply_rule(schema, rule, cty, v, frames, path)?,
                };
                path.pop();
                out.push(mapped);
            }
            frames.pop();
            Ok(Value::Composite(out))
        }
        (TypeRef::StringOf(elem), Value::Str(elems)) => {
            let elem_ty = TypeRef::Named(elem.clone());
            let mut out = Vec::with_capacity(elems.len());
            for (i, e) in elems.iter().enumerate() {
                frames.push(Frame::Str {
                    len: elems.len(),
                    index: i,
                    elems,
                });
                path.push(i);
                out.push(apply_rule(schema, rule, &elem_ty, e, frames, path)?);
                path.pop();
                frames.pop();
            }
            Ok(Value::Str(out))
        }
        // ill-shaped input is a precondition violation; leave untouched
        _ => Ok(value.clone()),
    }
}

/// One left-to-right pass: matches are adjacent (after, before) pairs of the
/// original string, so an inserted token never feeds a new match.
fn insert_pass(value: &Value, token: &str, after: &str, before: &str) -> Value {
    let elems = match value {
        Value::Str(elems) => elems,
        _ => return value.clone(),
    };
    let mut out = Vec::with_capacity(elems.len() + 1);
    for (i, e) in elems.iter().enumerate() {
        out.push(e.clone());
        let next_matches = elems
            .get(i + 1)
            .is_some_and(|n| *n == Value::Atomic(before.to_string()));
        if *e == Value::Atomic(after.to_string()) && next_matches {
            out.push(Value::Atomic(token.to_string()));
        }
    }
    Value::Str(out)
}

fn delete_pass<'a>(
    value: &'a Value,
    token: &str,
    guard: &Guard,
    frames: &mut Vec<Frame<'a>>,
    path: &[usize],
) -> Result<Value> {
    let elems = match value {
        Value::Str(elems) => elems,
        _ => return Ok(value.clone()),
    };
    let mut out = Vec::with_capacity(elems.len());
    for (i, e) in elems.iter().enumerate() {
        let is_match = if *e == Value::Atomic(token.to_string()) {
            frames.push(Frame::Str {
                len: elems.len(),
                index: i,
                elems,
            });
            let hit = guard_holds(guard, frames);
            frames.pop();
            hit
        } else {
            false
        };
        if !is_match {
            out.push(e.clone());
        }
    }
    if out.is_empty() {
        let p: Vec<String> = path.iter().map(|i| i.to_string()).collect();
        return Err(Error::invalid(format!(
            "delete of `{token}` at [{}] would empty the string",
            p.join(".")
        )));
    }
    Ok(Value::Str(out))
}

/// One pair-merger contrast per unordered pair of `phi0`, in lexicographic
/// pair order, with object type equal to the atomic type (retarget with
/// [`ContrastSpec::for_object_type`] for structured corpora).
pub fn binary_oppositions(
    schema: Arc<Schema>,
    atomic_type: &str,
    phi0: &[String],
) -> Result<Vec<ContrastSpec>> {
    let inventory = schema.atomic_inventory(atomic_type)?;
    let set: BTreeSet<String> = phi0.iter().cloned().collect();
    for tok in &set {
        if !inventory.iter().any(|t| t == tok) {
            return Err(Error::invalid(format!(
                "token `{tok}` not in inventory of `{atomic_type}`"
            )));
        }
    }
    if set.len() < 2 {
        return Err(Error::invalid("need at least 2 distinct tokens"));
    }
    let toks: Vec<&String> = set.iter().collect();
    let mut specs = Vec::new();
    for i in 0..toks.len() {
        for j in (i + 1)..toks.len() {
            let partition = Partition::pair(&schema, atomic_type, toks[i], toks[j])?;
            specs.push(ContrastSpec::new(
                schema.clone(),
                atomic_type,
                vec![Rule::Relabel {
                    partition,
                    guard: Guard::unconditional(),
                }],
            )?);
        }
    }
    Ok(specs)
}

// ---------------------------------------------------------------------------
// Contrast file parsing

#[derive(Debug, Clone, PartialEq, Eq)]
enum CTok {
    LBrace,
    RBrace,
    Atom(String),
}

fn lex_contrast(line: &str) -> Vec<CTok> {
    let mut toks = Vec::new();
    let mut atom = String::new();
    let flush = |atom: &mut String, toks: &mut Vec<CTok>| {
        if !atom.is_empty() {
            toks.push(CTok::Atom(std::mem::take(atom)));
        }
    };
    for c in line.chars() {
        match c {
            '{' => {
                flush(&mut atom, &mut toks);
                toks.push(CTok::LBrace);
            }
            '}' => {
                flush(&mut atom, &mut toks);
                toks.push(CTok::RBrace);
            }
            c if c.is_whitespace() => flush(&mut atom, &mut toks),
            c => atom.push(c),
        }
    }
    flush(&mut atom, &mut toks);
    toks
}

fn parse_token_set(toks: &[CTok], pos: &mut usize, line_no: usize) -> Result<BTreeSet<String>> {
    match toks.get(*pos) {
        Some(CTok::LBrace) => *pos += 1,
        _ => return Err(Error::parse(line_no, "expected `{`")),
    }
    let mut set = BTreeSet::new();
    loop {
        match toks.get(*pos) {
            Some(CTok::Atom(a)) => {
                if !valid_token(a) {
                    return Err(Error::parse(line_no, format!("illegal token `{a}`")));
                }
                set.insert(a.clone());
                *pos += 1;
            }
            Some(CTok::RBrace) => {
                *pos += 1;
                break;
            }
            _ => return Err(Error::parse(line_no, "unclosed `{`")),
        }
    }
    if set.is_empty() {
        return Err(Error::parse(line_no, "empty token set"));
    }
    Ok(set)
}

fn parse_guard(toks: &[CTok], pos: &mut usize, line_no: usize) -> Result<Guard> {
    let mut preds = Vec::new();
    loop {
        let atom = match toks.get(*pos) {
            Some(CTok::Atom(a)) => a.clone(),
            None => return Err(Error::parse(line_no, "expected guard predicate")),
            _ => return Err(Error::parse(line_no, "malformed guard")),
        };
        *pos += 1;
        let pred = match atom.as_str() {
            "string-initial" => GuardPred::StringInitial,
            "string-final" => GuardPred::StringFinal,
            "outermost-initial" => GuardPred::OutermostInitial,
            "left-in" => GuardPred::LeftNeighborIn(parse_token_set(toks, pos, line_no)?),
            "right-in" => GuardPred::RightNeighborIn(parse_token_set(toks, pos, line_no)?),
            other => match other.split_once('=') {
                Some((comp, tok)) if !comp.is_empty() && !tok.is_empty() => {
                    GuardPred::SiblingEquals(comp.to_string(), tok.to_string())
                }
                _ => {
                    return Err(Error::parse(
                        line_no,
                        format!("unknown guard predicate `{other}`"),
                    ))
                }
            },
        };
        preds.push(pred);
        match toks.get(*pos) {
            Some(CTok::Atom(a)) if a == "&" => *pos += 1,
            None => break,
            _ => return Err(Error::parse(line_no, "expected `&` between guard predicates")),
        }
    }
    Ok(Guard { preds })
}

/// Parses the line-oriented contrast format:
///
/// ```text
/// partition <atomic-type> : {tok tok ...} {tok ...} ... [when <guard>]
/// insert <tok> in <type>.<component> after <tok> before <tok>
/// delete <tok> in <type>.<component> [when <guard>]
/// ```
///
/// Guard grammar: `comp=<token>` | `string-initial` | `string-final` |
/// `outermost-initial` | `left-in {tok ...}` | `right-in {tok ...}`, joined
/// by `&`.
pub fn parse_contrast(
    text: &str,
    schema: Arc<Schema>,
    object_type: &str,
) -> Result<ContrastSpec> {
    schema.require(object_type)?;
    let mut rules = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let rule = parse_rule_line(line, &schema, line_no)?;
        validate_rule(&schema, &rule).map_err(|e| Error::parse(line_no, e.to_string()))?;
        rules.push(rule);
    }
    ContrastSpec::new(schema, object_type, rules)
}

fn parse_rule_line(line: &str, schema: &Schema, line_no: usize) -> Result<Rule> {
    let toks = lex_contrast(line);
    let head = match toks.first() {
        Some(CTok::Atom(a)) => a.as_str(),
        _ => return Err(Error::parse(line_no, "empty rule")),
    };
    match head {
        "partition" => {
            let atomic_type = match toks.get(1) {
                Some(CTok::Atom(a)) => a.clone(),
                _ => return Err(Error::parse(line_no, "expected atomic type name")),
            };
            match toks.get(2) {
                Some(CTok::Atom(a)) if a == ":" => {}
                _ => return Err(Error::parse(line_no, "expected `:`")),
            }
            let mut pos = 3;
            let mut classes = Vec::new();
            while matches!(toks.get(pos), Some(CTok::LBrace)) {
                classes.push(parse_token_set(&toks, &mut pos, line_no)?);
            }
            if classes.is_empty() {
                return Err(Error::parse(line_no, "partition needs at least one class"));
            }
            let guard = match toks.get(pos) {
                None => Guard::unconditional(),
                Some(CTok::Atom(a)) if a == "when" => {
                    pos += 1;
                    parse_guard(&toks, &mut pos, line_no)?
                }
                _ => return Err(Error::parse(line_no, "expected `when` or end of line")),
            };
            let partition = Partition::new(schema, atomic_type, classes)
                .map_err(|e| Error::parse(line_no, e.to_string()))?;
            Ok(Rule::Relabel { partition, guard })
        }
        "insert" => {
            let words: Vec<&str> = line.split_whitespace().collect();
            // insert <tok> in <type>.<component> after <tok> before <tok>
            if words.len() != 8 || words[2] != "in" || words[4] != "after" || words[6] != "before" {
                return Err(Error::parse(
                    line_no,
                    "expected `insert <tok> in <type>.<component> after <tok> before <tok>`",
                ));
            }
            let (host_type, component) = words[3]
                .split_once('.')
                .ok_or_else(|| Error::parse(line_no, "expected `<type>.<component>`"))?;
            Ok(Rule::Insert {
                token: words[1].to_string(),
                host_type: host_type.to_string(),
                component: component.to_string(),
                after: words[5].to_string(),
                before: words[7].to_string(),
            })
        }
        "delete" => {
            let words: Vec<&str> = line.split_whitespace().collect();
            if words.len() < 4 || words[2] != "in" {
                return Err(Error::parse(
                    line_no,
                    "expected `delete <tok> in <type>.<component> [when <guard>]`",
                ));
            }
            let (host_type, component) = words[3]
                .split_once('.')
                .ok_or_else(|| Error::parse(line_no, "expected `<type>.<component>`"))?;
            let guard = if words.len() == 4 {
                Guard::unconditional()
            } else if words[4] == "when" {
                let guard_src = line
                    .split_once(" when ")
                    .map(|(_, g)| g)
                    .ok_or_else(|| Error::parse(line_no, "malformed `when` clause"))?;
                let gtoks = lex_contrast(guard_src);
                let mut pos = 0;
                let g = parse_guard(&gtoks, &mut pos, line_no)?;
                if pos != gtoks.len() {
                    return Err(Error::parse(line_no, "trailing tokens after guard"));
                }
                g
            } else {
                return Err(Error::parse(line_no, "expected `when` or end of line"));
            };
            Ok(Rule::Delete {
                token: words[1].to_string(),
                host_type: host_type.to_string(),
                component: component.to_string(),
                guard,
            })
        }
        other => Err(Error::parse(line_no, format!("unknown rule kind `{other}`"))),
    }
}
