//! Type system for linguistic objects.
//!
//! A [`Schema`] names a set of types: atomic types with a finite token
//! inventory, composite types with a fixed, ordered component list, and
//! (as component types only) strings of a single element type. A [`Value`]
//! is the corresponding tree: an atomic token, a tuple of component values,
//! or a non-empty sequence of same-typed values.
//!
//! Two values are equal iff their canonical serializations are identical;
//! tokens may not contain whitespace or the reserved characters, so the
//! serialization needs no escaping.

use std::fmt;
use std::fmt::Write as _;

use indexmap::IndexMap;

use crate::error::{Error, Result};

/// Characters banned from tokens; they delimit the canonical serialization
/// and the file formats (`#` starts a comment).
pub const RESERVED: &[char] = &['(', ')', ';', '{', '}', '#'];

pub fn valid_token(tok: &str) -> bool {
    !tok.is_empty() && !tok.contains(|c: char| c.is_whitespace() || RESERVED.contains(&c))
}

/// Reference to a type from a component slot: either a named type or a
/// variable-length string of a named element type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TypeRef {
    Named(String),
    StringOf(String),
}

impl TypeRef {
    pub fn referenced_name(&self) -> &str {
        match self {
            TypeRef::Named(n) | TypeRef::StringOf(n) => n,
        }
    }
}

impl fmt::Display for TypeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeRef::Named(n) => write!(f, "{n}"),
            TypeRef::StringOf(n) => write!(f, "string<{n}>"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeDef {
    /// Finite, ordered, duplicate-free value inventory.
    Atomic { inventory: Vec<String> },
    /// Fixed list of (component name, component type); values are positional.
    Composite { components: Vec<(String, TypeRef)> },
}

/// Ordered, validated collection of type definitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    typedefs: IndexMap<String, TypeDef>,
}

impl Schema {
    /// Builds a schema from definitions in order, checking every invariant:
    /// unique names, defined references, acyclic references, non-empty
    /// duplicate-free inventories, unique component names, legal tokens.
    pub fn from_typedefs(defs: Vec<(String, TypeDef)>) -> Result<Schema> {
        let mut typedefs = IndexMap::new();
        for (name, def) in defs {
            if !valid_token(&name) {
                return Err(Error::invalid(format!("illegal type name `{name}`")));
            }
            if typedefs.insert(name.clone(), def).is_some() {
                return Err(Error::invalid(format!("duplicate type name `{name}`")));
            }
        }
        let schema = Schema { typedefs };
        schema.validate()?;
        Ok(schema)
    }

    fn validate(&self) -> Result<()> {
        for (name, def) in &self.typedefs {
            match def {
                TypeDef::Atomic { inventory } => {
                    if inventory.is_empty() {
                        return Err(Error::invalid(format!(
                            "atomic type `{name}` has an empty inventory"
                        )));
                    }
                    let mut seen = std::collections::BTreeSet::new();
                    for tok in inventory {
                        if !valid_token(tok) {
                            return Err(Error::invalid(format!(
                                "illegal token `{tok}` in inventory of `{name}`"
                            )));
                        }
                        if !seen.insert(tok) {
                            return Err(Error::invalid(format!(
                                "duplicate token `{tok}` in inventory of `{name}`"
                            )));
                        }
                    }
                }
                TypeDef::Composite { components } => {
                    if components.is_empty() {
                        return Err(Error::invalid(format!(
                            "composite type `{name}` has no components"
                        )));
                    }
                    let mut seen = std::collections::BTreeSet::new();
                    for (comp, ty) in components {
                        if !seen.insert(comp) {
                            return Err(Error::invalid(format!(
                                "duplicate component name `{comp}` in `{name}`"
                            )));
                        }
                        let referenced = ty.referenced_name();
                        if !self.typedefs.contains_key(referenced) {
                            return Err(Error::invalid(format!(
                                "type `{name}` references undefined type `{referenced}`"
                            )));
                        }
                    }
                }
            }
        }
        self.check_cycles()
    }

    fn check_cycles(&self) -> Result<()> {
        // 0 = unvisited, 1 = on stack, 2 = done
        fn visit(schema: &Schema, name: &str, state: &mut IndexMap<String, u8>) -> Result<()> {
            match state.get(name).copied().unwrap_or(0) {
                1 => {
                    return Err(Error::invalid(format!(
                        "cyclic type reference through `{name}`"
                    )))
                }
                2 => return Ok(()),
                _ => {}
            }
            state.insert(name.to_string(), 1);
            if let Some(TypeDef::Composite { components }) = schema.typedefs.get(name) {
                for (_, ty) in components {
                    visit(schema, ty.referenced_name(), state)?;
                }
            }
            state.insert(name.to_string(), 2);
            Ok(())
        }
        let mut state = IndexMap::new();
        for name in self.typedefs.keys() {
            visit(self, name, &mut state)?;
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&TypeDef> {
        self.typedefs.get(name)
    }

    pub fn require(&self, name: &str) -> Result<&TypeDef> {
        self.get(name)
            .ok_or_else(|| Error::invalid(format!("unknown type `{name}`")))
    }

    pub fn type_names(&self) -> impl Iterator<Item = &str> {
        self.typedefs.keys().map(|s| s.as_str())
    }

    pub fn atomic_inventory(&self, name: &str) -> Result<&[String]> {
        match self.require(name)? {
            TypeDef::Atomic { inventory } => Ok(inventory),
            _ => Err(Error::invalid(format!("type `{name}` is not atomic"))),
        }
    }

    pub fn is_atomic(&self, name: &str) -> bool {
        matches!(self.get(name), Some(TypeDef::Atomic { .. }))
    }

    /// Serializes back to the schema file format; `parse_schema` of the
    /// result yields an equivalent schema.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (name, def) in &self.typedefs {
            match def {
                TypeDef::Atomic { inventory } => {
                    let _ = writeln!(out, "atomic {name} = {}", inventory.join(" "));
                }
                TypeDef::Composite { components } => {
                    let comps: Vec<String> = components
                        .iter()
                        .map(|(c, ty)| format!("{c}:{ty}"))
                        .collect();
                    let _ = writeln!(out, "composite {name} = {}", comps.join(" "));
                }
            }
        }
        out
    }
}

/// Parses the line-oriented schema format:
///
/// ```text
/// atomic <name> = <tok> <tok> ...
/// composite <name> = <comp>:<type> <comp>:<type> ...
/// ```
///
/// where `<type>` is a type name or `string<name>`. `#` starts a comment;
/// blank lines are ignored.
pub fn parse_schema(text: &str) -> Result<Schema> {
    let mut defs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (kind, rest) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::parse(line_no, format!("malformed line `{line}`")))?;
        let (name, body) = rest
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, "expected `=`"))?;
        let name = name.trim().to_string();
        let body = body.trim();
        let def = match kind {
            "atomic" => {
                let inventory: Vec<String> =
                    body.split_whitespace().map(|s| s.to_string()).collect();
                if inventory.is_empty() {
                    return Err(Error::parse(
                        line_no,
                        format!("empty inventory for atomic type `{name}`"),
                    ));
                }
                TypeDef::Atomic { inventory }
            }
            "composite" => {
                let mut components = Vec::new();
                for item in body.split_whitespace() {
                    let (comp, ty) = item.split_once(':').ok_or_else(|| {
                        Error::parse(line_no, format!("expected `<comp>:<type>`, got `{item}`"))
                    })?;
                    let ty = parse_type_ref(ty)
                        .ok_or_else(|| Error::parse(line_no, format!("bad type `{ty}`")))?;
                    components.push((comp.to_string(), ty));
                }
                if components.is_empty() {
                    return Err(Error::parse(
                        line_no,
                        format!("composite type `{name}` has no components"),
                    ));
                }
                TypeDef::Composite { components }
            }
            other => {
                return Err(Error::parse(
                    line_no,
                    format!("unknown definition kind `{other}`"),
                ))
            }
        };
        defs.push((name, def));
    }
    Schema::from_typedefs(defs)
}

pub(crate) fn parse_type_ref(s: &str) -> Option<TypeRef> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix("string<").and_then(|r| r.strip_suffix('>')) {
        if valid_token(inner) {
            return Some(TypeRef::StringOf(inner.to_string()));
        }
        return None;
    }
    if valid_token(s) {
        return Some(TypeRef::Named(s.to_string()));
    }
    None
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

// ---------------------------------------------------------------------------
// Values

/// A value tree: atomic token, positional tuple, or non-empty sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Atomic(String),
    Composite(Vec<Value>),
    Str(Vec<Value>),
}

impl Value {
    /// Canonical serialization. Atomic values print their token, string
    /// values join elements with single spaces, composite values wrap
    /// components in `( ... ; ... )`.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        self.write_canonical(&mut out);
        out
    }

    fn write_canonical(&self, out: &mut String) {
        match self {
            Value::Atomic(tok) => out.push_str(tok),
            Value::Str(elems) => {
                for (i, e) in elems.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    e.write_canonical(out);
                }
            }
            Value::Composite(comps) => {
                out.push('(');
                for (i, c) in comps.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" ; ");
                    }
                    c.write_canonical(out);
                }
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// A single well-typedness failure, located by component/element indices
/// from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: Vec<usize>,
    pub msg: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "at [{}]: {}", path.join("."), self.msg)
    }
}

/// Checks `value` against `(schema, type_name)`; empty result means
/// well-typed. Unknown `type_name` is an error, not a violation.
pub fn validate_value(schema: &Schema, type_name: &str, value: &Value) -> Result<Vec<Violation>> {
    schema.require(type_name)?;
    let mut out = Vec::new();
    check_value(
        schema,
        &TypeRef::Named(type_name.to_string()),
        value,
        &mut Vec::new(),
        &mut out,
    );
    Ok(out)
}

fn check_value(
    schema: &Schema,
    ty: &TypeRef,
    value: &Value,
    path: &mut Vec<usize>,
    out: &mut Vec<Violation>,
) {
    match ty {
        TypeRef::Named(name) => match schema.get(name) {
            Some(TypeDef::Atomic { inventory }) => match value {
                Value::Atomic(tok) => {
                    if !inventory.iter().any(|t| t == tok) {
                        out.push(Violation {
                            path: path.clone(),
                            msg: format!("token `{tok}` not in inventory of `{name}`"),
                        });
                    }
                }
                _ => out.push(Violation {
                    path: path.clone(),
                    msg: format!("expected atomic `{name}` value"),
                }),
            },
            Some(TypeDef::Composite { components }) => match value {
                Value::Composite(vals) => {
                    if vals.len() != components.len() {
                        out.push(Violation {
                            path: path.clone(),
                            msg: format!(
                                "`{name}` expects {} components, got {}",
                                components.len(),
                                vals.len()
                            ),
                        });
                        return;
                    }
                    for (i, ((_, cty), v)) in components.iter().zip(vals).enumerate() {
                        path.push(i);
                        check_value(schema, cty, v, path, out);
                        path.pop();
                    }
                }
                _ => out.push(Violation {
                    path: path.clone(),
                    msg: format!("expected composite `{name}` value"),
                }),
            },
            None => out.push(Violation {
                path: path.clone(),
                msg: format!("unknown type `{name}`"),
            }),
        },
        TypeRef::StringOf(elem) => match value {
            Value::Str(elems) => {
                if elems.is_empty() {
                    out.push(Violation {
                        path: path.clone(),
                        msg: "empty string value".to_string(),
                    });
                }
                let elem_ty = TypeRef::Named(elem.clone());
                for (i, e) in elems.iter().enumerate() {
                    path.push(i);
                    check_value(schema, &elem_ty, e, path, out);
                    path.pop();
                }
            }
            _ => out.push(Violation {
                path: path.clone(),
                msg: format!("expected string<{elem}> value"),
            }),
        },
    }
}

/// Visits every atomic occurrence in `value` with its declared atomic type
/// name, in left-to-right order.
pub fn for_each_atomic<F: FnMut(&str, &str)>(
    schema: &Schema,
    ty: &TypeRef,
    value: &Value,
    f: &mut F,
) {
    match (ty, value) {
        (TypeRef::Named(name), Value::Atomic(tok)) => f(name, tok),
        (TypeRef::Named(name), Value::Composite(vals)) => {
            if let Some(TypeDef::Composite { components }) = schema.get(name) {
                for ((_, cty), v) in components.iter().zip(vals) {
                    for_each_atomic(schema, cty, v, f);
                }
            }
        }
        (TypeRef::StringOf(elem), Value::Str(elems)) => {
            let elem_ty = TypeRef::Named(elem.clone());
            for e in elems {
                for_each_atomic(schema, &elem_ty, e, f);
            }
        }
        _ => {}
    }
}

// ---------------------------------------------------------------------------
// Type-driven value parsing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Semi,
    Atom(String),
}

fn lex(line: &str, line_no: usize) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let mut atom = String::new();
    let flush = |atom: &mut String, toks: &mut Vec<Tok>| {
        if !atom.is_empty() {
            toks.push(Tok::Atom(std::mem::take(atom)));
        }
    };
    for c in line.chars() {
        match c {
            '(' => {
                flush(&mut atom, &mut toks);
                toks.push(Tok::Open);
            }
            ')' => {
                flush(&mut atom, &mut toks);
                toks.push(Tok::Close);
            }
            ';' => {
                flush(&mut atom, &mut toks);
                toks.push(Tok::Semi);
            }
            '{' | '}' => {
                return Err(Error::parse(
                    line_no,
                    format!("reserved character `{c}` in value"),
                ))
            }
            c if c.is_whitespace() => flush(&mut atom, &mut toks),
            c => atom.push(c),
        }
    }
    flush(&mut atom, &mut toks);
    Ok(toks)
}

struct Cursor<'a> {
    toks: &'a [Tok],
    pos: usize,
    line_no: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line_no, format!("token {}: {}", self.pos + 1, msg.into()))
    }
}

fn parse_value_at(cur: &mut Cursor<'_>, schema: &Schema, ty: &TypeRef) -> Result<Value> {
    match ty {
        TypeRef::Named(name) => match schema.require(name).map_err(|e| cur.err(e.to_string()))? {
            TypeDef::Atomic { inventory } => match cur.next() {
                Some(Tok::Atom(tok)) => {
                    if !inventory.iter().any(|t| t == tok) {
                        return Err(
                            cur.err(format!("token `{tok}` not in inventory of `{name}`"))
                        );
                    }
                    Ok(Value::Atomic(tok.clone()))
                }
                _ => Err(cur.err(format!("expected `{name}` token"))),
            },
            TypeDef::Composite { components } => {
                match cur.next() {
                    Some(Tok::Open) => {}
                    _ => return Err(cur.err(format!("expected `(` opening a `{name}` value"))),
                }
                let mut vals = Vec::new();
                for (i, (_, cty)) in components.iter().enumerate() {
                    if i > 0 {
                        match cur.next() {
                            Some(Tok::Semi) => {}
                            _ => {
                                return Err(cur.err(format!(
                                    "expected `;` between components of `{name}`"
                                )))
                            }
                        }
                    }
                    vals.push(parse_value_at(cur, schema, cty)?);
                }
                match cur.next() {
                    Some(Tok::Close) => {}
                    _ => return Err(cur.err(format!("expected `)` closing a `{name}` value"))),
                }
                Ok(Value::Composite(vals))
            }
        },
        TypeRef::StringOf(elem) => {
            let elem_ty = TypeRef::Named(elem.clone());
            let starts_elem = |t: Option<&Tok>| {
                matches!(
                    (t, schema.is_atomic(elem)),
                    (Some(Tok::Atom(_)), true) | (Some(Tok::Open), false)
                )
            };
            let mut elems = Vec::new();
            while starts_elem(cur.peek()) {
                elems.push(parse_value_at(cur, schema, &elem_ty)?);
            }
            if elems.is_empty() {
                return Err(cur.err(format!("expected at least one `{elem}` element")));
            }
            Ok(Value::Str(elems))
        }
    }
}

/// Parses a whitespace-separated sequence of canonical `object_type` values
/// from one line. Validation happens during parsing.
pub fn parse_value_sequence(
    schema: &Schema,
    object_type: &str,
    line: &str,
    line_no: usize,
) -> Result<Vec<Value>> {
    let toks = lex(line, line_no)?;
    let mut cur = Cursor {
        toks: &toks,
        pos: 0,
        line_no,
    };
    let ty = TypeRef::Named(object_type.to_string());
    let mut vals = Vec::new();
    while cur.peek().is_some() {
        vals.push(parse_value_at(&mut cur, schema, &ty)?);
    }
    Ok(vals)
}

/// Parses exactly one canonical `object_type` value from `text`.
pub fn parse_single_value(
    schema: &Schema,
    object_type: &str,
    text: &str,
    line_no: usize,
) -> Result<Value> {
    let mut vals = parse_value_sequence(schema, object_type, text, line_no)?;
    match vals.len() {
        1 => Ok(vals.remove(0)),
        n => Err(Error::parse(
            line_no,
            format!("expected one `{object_type}` value, found {n}"),
        )),
    }
}
