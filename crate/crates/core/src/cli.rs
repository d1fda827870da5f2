//! Input grammar, command dispatch and report formatting for the
//! `koszulkit` binary.
//!
//! ```text
//! # comment
//! ring char=5 vars=x,y
//! ideal x^2; y^2
//! module name=M shifts=0,0
//! [x, y]
//! [0, x^2]
//! cert name=F {"forms": [[1,0],[0,1]], "colons": [1,2]}
//! ```
//!
//! Each bracketed row after a `module` line is one relation, with one
//! entry per generator. Certificate JSON may span several lines.

use std::fmt;
use std::io::Read;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{is_prime, Monomial, MonomialOrder, PolyRing, Polynomial};
use crate::corpus::{build_fixture, theorem_suite, Fixture};
use crate::error::Error;
use crate::filtration::{
    all_linear_ideals_filtration, conca_flag, flag_colons, minimal_multiplicity_flag, search_groebner_flag,
    subsets_filtration, verify_groebner_flag, verify_koszul_filtration, Chain, FiltrationCertificate, FlagCertificate,
    LinearIdeal,
};
use crate::groebner::{colon_ideal, FreeModuleVector};
use crate::koszul::{check_factorization, koszul_verdict, poincare_hilbert_check, verdict_transfer_check, Method, Verdict};
use crate::quotient::{GradedModule, HilbertSeries, QuotientRing};
use crate::resolution::{betti_table, linear_part, regularity_verdict, resolve, BettiTable, Bounds};

// ---------------------------------------------------------------------------
// input documents

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.msg, self.pos)
    }
}

impl std::error::Error for ParseError {}

fn perr<T>(pos: Pos, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

#[derive(Clone, Debug)]
pub struct ModuleDecl {
    pub name: String,
    pub shifts: Vec<i32>,
    /// relations, one entry per generator
    pub rows: Vec<Vec<Polynomial>>,
    pos: Pos,
}

impl PartialEq for ModuleDecl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.shifts == other.shifts && self.rows == other.rows
    }
}

#[derive(Clone, Debug)]
pub struct CertDecl {
    pub name: String,
    pub value: Value,
    pos: Pos,
}

impl PartialEq for CertDecl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.value == other.value
    }
}

/// A parsed input: one ring, then any number of modules and certificates.
#[derive(Clone, Debug)]
pub struct InputDocument {
    pub poly: Arc<PolyRing>,
    pub ideal: Vec<Polynomial>,
    pub modules: Vec<ModuleDecl>,
    pub certs: Vec<CertDecl>,
}

impl PartialEq for InputDocument {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly && self.ideal == other.ideal && self.modules == other.modules && self.certs == other.certs
    }
}

struct Lexer<'a> {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col0: usize,
    vars: &'a PolyRing,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
}

impl<'a> Lexer<'a> {
    fn pos(&self, i: usize) -> Pos {
        Pos { line: self.line, col: self.col0 + i }
    }

    fn skip_ws(&mut self) {
        while self.i < self.chars.len() && self.chars[self.i].is_whitespace() {
            self.i += 1;
        }
    }

    fn next(&mut self) -> Result<Option<(Tok, Pos)>, ParseError> {
        self.skip_ws();
        let Some(&c) = self.chars.get(self.i) else { return Ok(None) };
        let start = self.i;
        let pos = self.pos(start);
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '0'..='9' => {
                while self.chars.get(self.i).is_some_and(|c| c.is_ascii_digit()) {
                    self.i += 1;
                }
                let s: String = self.chars[start..self.i].iter().collect();
                let v = s.parse::<u64>().or_else(|_| perr(pos, format!("integer {s} is too large")))?;
                return Ok(Some((Tok::Int(v), pos)));
            }
            c if c.is_alphabetic() || c == '_' => {
                while self.chars.get(self.i).is_some_and(|c| c.is_alphanumeric() || *c == '_') {
                    self.i += 1;
                }
                let s: String = self.chars[start..self.i].iter().collect();
                let v = self.vars.var_index(&s).ok_or_else(|| ParseError { pos, msg: format!("unknown variable {s}") })?;
                return Ok(Some((Tok::Var(v), pos)));
            }
            other => return perr(pos, format!("unexpected character {other:?}")),
        };
        self.i += 1;
        Ok(Some((tok, pos)))
    }
}

/// Parses a polynomial from `text`, which starts at column `col0` of `line`.
pub fn parse_polynomial(ring: &Arc<PolyRing>, text: &str, line: usize, col0: usize) -> Result<Polynomial, ParseError> {
    let mut lx = Lexer { chars: text.chars().collect(), i: 0, line, col0, vars: ring };
    let mut toks = Vec::new();
    while let Some(t) = lx.next()? {
        toks.push(t);
    }
    let end = lx.pos(lx.chars.len());
    if toks.is_empty() {
        return perr(end, "expected a polynomial");
    }
    let field = ring.field();
    let n = ring.nvars();
    let mut terms = Vec::new();
    let mut k = 0;
    let mut first = true;
    while k < toks.len() {
        let mut negative = false;
        match toks[k].0 {
            Tok::Plus | Tok::Minus => {
                negative = toks[k].0 == Tok::Minus;
                k += 1;
            }
            _ if !first => return perr(toks[k].1, "implicit multiplication is not allowed; use *"),
            _ => {}
        }
        first = false;
        let mut coeff = field.from_i64(if negative { -1 } else { 1 });
        let mut exps = vec![0u16; n];
        loop {
            let Some((t, pos)) = toks.get(k).cloned() else { return perr(end, "expected a factor") };
            k += 1;
            match t {
                Tok::Int(v) => coeff = field.mul(coeff, (v % field.p() as u64) as u32),
                Tok::Var(v) => {
                    let mut e = 1u64;
                    if toks.get(k).map(|t| &t.0) == Some(&Tok::Caret) {
                        match toks.get(k + 1) {
                            Some((Tok::Int(x), _)) => e = *x,
                            Some((_, p)) => return perr(*p, "expected an exponent"),
                            None => return perr(end, "expected an exponent"),
                        }
                        k += 2;
                    }
                    let total = exps[v] as u64 + e;
                    if total > u16::MAX as u64 {
                        return perr(pos, "exponent too large");
                    }
                    exps[v] = total as u16;
                }
                _ => return perr(pos, "expected a number or a variable"),
            }
            match toks.get(k) {
                Some((Tok::Star, _)) => k += 1,
                Some((Tok::Caret, p)) => return perr(*p, "exponent must follow a variable"),
                Some((Tok::Int(_) | Tok::Var(_), p)) => return perr(*p, "implicit multiplication is not allowed; use *"),
                _ => break,
            }
        }
        terms.push((coeff, Monomial::new(exps)));
    }
    Ok(Polynomial::from_terms(ring, terms))
}

/// Splits `s` on `sep` at top level, returning each piece with its char offset.
fn split_with_offsets(s: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start_byte = 0;
    let mut start_char = 0;
    for (ci, (bi, c)) in s.char_indices().enumerate() {
        if c == sep {
            out.push((start_char, &s[start_byte..bi]));
            start_byte = bi + c.len_utf8();
            start_char = ci + 1;
        }
    }
    out.push((start_char, &s[start_byte..]));
    out
}

/// Offset of the first non-space char of a piece, in chars.
fn lead(s: &str) -> usize {
    s.chars().take_while(|c| c.is_whitespace()).count()
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

fn key_values<'a>(line: &Line<'a>, rest: &'a str, rest_col: usize) -> Vec<(String, &'a str, Pos, Pos)> {
    // "key=value" words separated by spaces
    let mut out = Vec::new();
    let mut col = rest_col;
    for word in rest.split(' ') {
        if !word.is_empty() {
            let kpos = Pos { line: line.no, col };
            let (k, v) = word.split_once('=').unwrap_or((word, ""));
            let vpos = Pos { line: line.no, col: col + k.chars().count() + 1 };
            out.push((k.to_string(), v, kpos, vpos));
        }
        col += word.chars().count() + 1;
    }
    out
}

fn parse_int_list(v: &str, pos: Pos) -> Result<Vec<i32>, ParseError> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    split_with_offsets(v, ',')
        .into_iter()
        .map(|(off, s)| {
            s.trim().parse::<i32>().or_else(|_| perr(Pos { line: pos.line, col: pos.col + off }, format!("expected an integer, got {s:?}")))
        })
        .collect()
}

fn is_identifier(s: &str) -> bool {
    let mut c = s.chars();
    c.next().is_some_and(|c| c.is_alphabetic() || c == '_') && c.all(|c| c.is_alphanumeric() || c == '_')
}

/// Parses an input document, reporting the first problem with its position.
pub fn parse_input(text: &str) -> Result<InputDocument, ParseError> {
    let lines: Vec<Line> = text.lines().enumerate().map(|(i, t)| Line { no: i + 1, text: t }).collect();
    let mut poly: Option<Arc<PolyRing>> = None;
    let mut ideal = Vec::new();
    let mut modules: Vec<ModuleDecl> = Vec::new();
    let mut certs: Vec<CertDecl> = Vec::new();
    let mut k = 0;
    let mut in_module = false;
    while k < lines.len() {
        let line = &lines[k];
        k += 1;
        let body = line.text.split('#').next().unwrap();
        if body.trim().is_empty() {
            continue;
        }
        let indent = lead(body);
        let trimmed = body.trim_end();
        let content = &trimmed[body.len() - body.trim_start().len()..];
        let start = Pos { line: line.no, col: indent + 1 };
        let (word, rest) = content.split_once(' ').unwrap_or((content, ""));
        let rest_col = indent + word.chars().count() + 2;
        if word != "ring" && poly.is_none() {
            return perr(start, "the document must start with a ring line");
        }
        if !content.starts_with('[') {
            in_module = false;
        }
        match word {
            "ring" => {
                if poly.is_some() {
                    return perr(start, "only one ring line is allowed");
                }
                let mut p = None;
                let mut vars = None;
                for (key, v, kpos, vpos) in key_values(line, rest, rest_col) {
                    match key.as_str() {
                        "char" => {
                            let n: u64 = v.parse().or_else(|_| perr(vpos, format!("expected a prime, got {v:?}")))?;
                            if !is_prime(n) || n >= 1 << 31 {
                                return perr(vpos, format!("char {n} is not a prime below 2^31"));
                            }
                            p = Some(n as u32);
                        }
                        "vars" => {
                            let mut names: Vec<String> = Vec::new();
                            if !v.is_empty() {
                                for (off, name) in split_with_offsets(v, ',') {
                                    let pos = Pos { line: line.no, col: vpos.col + off };
                                    if !is_identifier(name) {
                                        return perr(pos, format!("invalid variable name {name:?}"));
                                    }
                                    if names.iter().any(|x| x == name) {
                                        return perr(pos, format!("duplicate variable {name}"));
                                    }
                                    names.push(name.to_string());
                                }
                            }
                            vars = Some(names);
                        }
                        _ => return perr(kpos, format!("unknown ring attribute {key:?}")),
                    }
                }
                let p = p.ok_or_else(|| ParseError { pos: start, msg: "ring needs char=<p>".into() })?;
                let vars = vars.ok_or_else(|| ParseError { pos: start, msg: "ring needs vars=<names>".into() })?;
                poly = Some(PolyRing::new(p, vars, MonomialOrder::DegRevLex).expect("validated"));
            }
            "ideal" => {
                let ring = poly.as_ref().unwrap();
                for (off, piece) in split_with_offsets(rest, ';') {
                    if piece.trim().is_empty() {
                        continue;
                    }
                    let col = rest_col + off + lead(piece);
                    let pos = Pos { line: line.no, col };
                    let f = parse_polynomial(ring, piece.trim(), line.no, col)?;
                    if f.is_zero() {
                        continue;
                    }
                    if !f.is_homogeneous() {
                        return perr(pos, "non-homogeneous generator");
                    }
                    if f.degree().unwrap() < 2 {
                        return perr(pos, "generators must have degree at least 2; eliminate linear forms by changing variables");
                    }
                    ideal.push(f);
                }
            }
            "module" => {
                let mut name = None;
                let mut shifts = None;
                for (key, v, kpos, vpos) in key_values(line, rest, rest_col) {
                    match key.as_str() {
                        "name" => {
                            if !is_identifier(v) {
                                return perr(vpos, format!("invalid module name {v:?}"));
                            }
                            if v == "k" || v == "R" || modules.iter().any(|m| m.name == v) {
                                return perr(vpos, format!("module name {v} is reserved or already used"));
                            }
                            name = Some(v.to_string());
                        }
                        "shifts" => {
                            let s = parse_int_list(v, vpos)?;
                            if s.iter().any(|&x| x < 0) {
                                return perr(vpos, "shifts must be nonnegative");
                            }
                            shifts = Some(s);
                        }
                        _ => return perr(kpos, format!("unknown module attribute {key:?}")),
                    }
                }
                let name = name.ok_or_else(|| ParseError { pos: start, msg: "module needs name=<id>".into() })?;
                let shifts = shifts.ok_or_else(|| ParseError { pos: start, msg: "module needs shifts=<ints>".into() })?;
                modules.push(ModuleDecl { name, shifts, rows: Vec::new(), pos: start });
                in_module = true;
            }
            _ if content.starts_with('[') => {
                if !in_module {
                    return perr(start, "relation row outside a module block");
                }
                let ring = poly.as_ref().unwrap().clone();
                let m = modules.last_mut().unwrap();
                let Some(inner) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) else {
                    return perr(start, "a relation row must be enclosed in [ ]");
                };
                let mut row = Vec::new();
                let mut degree: Option<i32> = None;
                for (off, piece) in split_with_offsets(inner, ',') {
                    let col = indent + 2 + off + lead(piece);
                    let pos = Pos { line: line.no, col };
                    let f = parse_polynomial(&ring, piece.trim(), line.no, col)?;
                    let kx = row.len();
                    if kx >= m.shifts.len() {
                        return perr(pos, format!("row has more than {} entries", m.shifts.len()));
                    }
                    if !f.is_homogeneous() {
                        return perr(pos, "non-homogeneous entry");
                    }
                    if let Some(d) = f.degree() {
                        let d = d as i32 + m.shifts[kx];
                        if *degree.get_or_insert(d) != d {
                            return perr(pos, "entry degree does not match the rest of the row");
                        }
                    }
                    row.push(f);
                }
                if row.len() != m.shifts.len() {
                    return perr(start, format!("row has {} entries, expected {}", row.len(), m.shifts.len()));
                }
                m.rows.push(row);
                in_module = true;
            }
            "cert" => {
                let (head, json_start) = match rest.find('{') {
                    Some(b) => (&rest[..b], b),
                    None => return perr(start, "certificate JSON must start with {"),
                };
                let kv = key_values(line, head.trim_end(), rest_col);
                let mut name = None;
                for (key, v, kpos, vpos) in kv {
                    if key != "name" {
                        return perr(kpos, format!("unknown cert attribute {key:?}"));
                    }
                    if !is_identifier(v) || certs.iter().any(|c| c.name == v) {
                        return perr(vpos, format!("invalid or duplicate certificate name {v:?}"));
                    }
                    name = Some(v.to_string());
                }
                let name = name.ok_or_else(|| ParseError { pos: start, msg: "cert needs name=<id>".into() })?;
                let json_col = rest_col + rest[..json_start].chars().count();
                // collect lines until braces balance
                let mut buf = rest[json_start..].to_string();
                let json_line = line.no;
                while !balanced(&buf) {
                    let Some(next) = lines.get(k) else {
                        return perr(Pos { line: json_line, col: json_col }, "unterminated certificate JSON");
                    };
                    k += 1;
                    buf.push('\n');
                    buf.push_str(next.text);
                }
                let value: Value = serde_json::from_str(&buf).map_err(|e| {
                    let col = if e.line() == 1 { json_col + e.column().saturating_sub(1) } else { e.column() };
                    ParseError { pos: Pos { line: json_line + e.line() - 1, col }, msg: format!("invalid certificate JSON: {e}") }
                })?;
                certs.push(CertDecl { name, value, pos: Pos { line: json_line, col: json_col } });
            }
            other => return perr(start, format!("unknown statement {other:?}")),
        }
    }
    let Some(poly) = poly else {
        return perr(Pos { line: 1, col: 1 }, "the document must start with a ring line");
    };
    Ok(InputDocument { poly, ideal, modules, certs })
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i64;
    let mut in_str = false;
    let mut escape = false;
    for c in s.chars() {
        if in_str {
            match c {
                _ if escape => escape = false,
                '\\' => escape = true,
                '"' => in_str = false,
                _ => {}
            }
            continue;
        }
        match c {
            '"' => in_str = true,
            '{' | '[' => depth += 1,
            '}' | ']' => depth -= 1,
            _ => {}
        }
    }
    depth <= 0
}

impl fmt::Display for InputDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring char={} vars={}", self.poly.p(), self.poly.names().join(","))?;
        if !self.ideal.is_empty() {
            let gens: Vec<String> = self.ideal.iter().map(|g| g.to_string()).collect();
            writeln!(f, "ideal {}", gens.join("; "))?;
        }
        for m in &self.modules {
            write!(f, "{}", rows_block(&m.name, &m.shifts, &m.rows))?;
        }
        for c in &self.certs {
            writeln!(f, "cert name={} {}", c.name, c.value)?;
        }
        Ok(())
    }
}

fn rows_block(name: &str, shifts: &[i32], rows: &[Vec<Polynomial>]) -> String {
    let mut s = format!("module name={name} shifts={}\n", shifts.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
    for row in rows {
        let entries: Vec<String> = row.iter().map(|e| e.to_string()).collect();
        s.push_str(&format!("[{}]\n", entries.join(", ")));
    }
    s
}

/// A module presentation in the input grammar, for replaying reports.
pub fn module_block(name: &str, m: &GradedModule) -> String {
    let rows: Vec<Vec<Polynomial>> = m.columns().iter().map(|c| c.components().to_vec()).collect();
    rows_block(name, m.shifts(), &rows)
}

impl InputDocument {
    pub fn from_ring(ring: &QuotientRing) -> Self {
        InputDocument { poly: ring.poly_ring().clone(), ideal: ring.generators().to_vec(), modules: Vec::new(), certs: Vec::new() }
    }

    pub fn ring(&self) -> Result<Arc<QuotientRing>, Error> {
        Ok(Arc::new(QuotientRing::new(self.poly.p(), self.poly.names().to_vec(), self.ideal.clone())?))
    }

    /// A module by name: `k` is the residue field, `R` the ring itself.
    pub fn module(&self, ring: &Arc<QuotientRing>, name: &str) -> Result<GradedModule, Error> {
        match name {
            "k" => Ok(GradedModule::residue_field(ring)),
            "R" => GradedModule::free(ring, vec![0]),
            _ => {
                let m = self
                    .modules
                    .iter()
                    .find(|m| m.name == name)
                    .ok_or_else(|| Error::InvalidArgument(format!("no module named {name}")))?;
                let cols = m
                    .rows
                    .iter()
                    .map(|r| FreeModuleVector::new(r.iter().map(|f| f.rebase(ring.poly_ring())).collect(), m.shifts.clone()))
                    .collect();
                GradedModule::new(ring, m.shifts.clone(), cols).map_err(|e| Error::InvalidArgument(format!("module {name} at {}: {e}", m.pos)))
            }
        }
    }

    pub fn cert(&self, name: &str) -> Result<&CertDecl, Error> {
        self.certs.iter().find(|c| c.name == name).ok_or_else(|| Error::InvalidArgument(format!("no certificate named {name}")))
    }
}

impl CertDecl {
    pub fn position(&self) -> Pos {
        self.pos
    }

    pub fn filtration(&self) -> Result<FiltrationCertificate, Error> {
        serde_json::from_value(self.value.clone()).map_err(|e| Error::MalformedCertificate(format!("{} at {}: {e}", self.name, self.pos)))
    }

    pub fn flag(&self) -> Result<FlagCertificate, Error> {
        serde_json::from_value(self.value.clone()).map_err(|e| Error::MalformedCertificate(format!("{} at {}: {e}", self.name, self.pos)))
    }

    /// The chain carried by a flag or a filtration certificate, verified.
    pub fn chain(&self, ring: &QuotientRing) -> Result<Chain, Error> {
        if self.value.get("forms").is_some() {
            self.flag()?.chain(ring)
        } else {
            self.filtration()?.chain(ring)
        }
    }
}

// ---------------------------------------------------------------------------
// command line

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "koszulkit", version, about = "Graded invariants and Koszulness certificates over prime fields")]
pub struct Cli {
    /// input document (default: standard input, unless --fixture is given)
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// use a bundled fixture ring instead of an input document
    #[arg(long, global = true)]
    pub fixture: Option<String>,
    /// module name from the document; `k` is the residue field, `R` the ring
    #[arg(long, global = true)]
    pub module: Option<String>,
    #[arg(long, global = true, default_value_t = 5)]
    pub imax: usize,
    #[arg(long, global = true, default_value_t = 8, allow_negative_numbers = true)]
    pub dmax: i32,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// cap on enumerated subspaces, forms or flag nodes
    #[arg(long, global = true, default_value_t = 5000)]
    pub budget: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hilbert series of the ring or of a module
    Hilbert,
    /// reduced Gröbner basis of the defining ideal
    Gb,
    /// colon ideal (J : I)
    Colon {
        /// generators of J, separated by ';'
        #[arg(long = "j", default_value = "")]
        j: String,
        /// generators of I, separated by ';'
        #[arg(long = "i")]
        i: String,
    },
    /// truncated minimal free resolution
    Resolve,
    /// graded Betti table
    Betti,
    /// regularity verdict
    Reg,
    /// Koszulness verdict
    Koszul {
        #[arg(long, default_value = "betti-diagonal")]
        method: String,
    },
    /// homology of the linear part of the resolution
    Linpart,
    /// Poincaré series against H_M(-t)/H_R(-t)
    Poincare,
    /// Poincaré series factorization along a flag
    Factorize {
        /// certificate carrying the flag (a flag, or a filtration with a chain)
        #[arg(long)]
        cert: Option<String>,
        /// flag forms, in order, when no certificate is named
        #[arg(long)]
        form: Vec<String>,
        #[arg(long)]
        r: usize,
    },
    /// Koszul filtrations
    Filtration {
        #[command(subcommand)]
        action: FiltrationAction,
    },
    /// Gröbner flags
    Flag {
        #[command(subcommand)]
        action: FlagAction,
    },
    /// theorem suites on a fixture
    Suite {
        #[arg(value_enum)]
        which: SuiteId,
    },
    /// print a bundled fixture
    Example { name: String },
}

#[derive(Debug, Subcommand)]
pub enum FiltrationAction {
    Verify {
        #[arg(long)]
        cert: String,
    },
    Subsets,
    AllLinear,
}

#[derive(Debug, Subcommand)]
pub enum FlagAction {
    Verify {
        #[arg(long)]
        cert: String,
    },
    Search,
    Conca {
        #[arg(long)]
        form: String,
    },
    Minmult {
        /// generators of the reduction J
        #[arg(long, required = true)]
        form: Vec<String>,
        #[arg(long, default_value_t = 6)]
        dstab: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteId {
    Reg,
    Minmult,
    Fitz,
}

impl SuiteId {
    fn name(self) -> &'static str {
        match self {
            SuiteId::Reg => "reg",
            SuiteId::Minmult => "minmult",
            SuiteId::Fitz => "fitz",
        }
    }
}

/// What a command produced: stdout text, stderr text and the exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded(_) | Error::Bounds(_) => EXIT_INCONCLUSIVE,
        Error::Precondition(_) | Error::TheoremViolation(_) => EXIT_NEGATIVE,
        _ => EXIT_INPUT,
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    p: u32,
    seed: u64,
    bounds: Bounds,
    report: Value,
}

/// One command result before formatting.
pub struct Report {
    pub command: String,
    pub json: Value,
    pub text: String,
    pub code: i32,
}

/// Renders a report. JSON keys are emitted in sorted or declaration order,
/// so identical inputs give byte-identical output.
pub fn emit_report(report: &Report, cli: &Cli, p: u32, format: Format) -> String {
    match format {
        Format::Text => report.text.clone(),
        Format::Json => {
            let env = Envelope {
                command: &report.command,
                p,
                seed: cli.seed,
                bounds: Bounds { imax: cli.imax, dmax: cli.dmax },
                report: report.json.clone(),
            };
            let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

/// Parses arguments and runs one command. `stdin` supplies the document
/// when neither `--input` nor `--fixture` is given.
pub fn run_cli<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    match load(&cli, stdin) {
        Err(msg) => Outcome { stdout: String::new(), stderr: format!("error: {msg}\n"), code: EXIT_INPUT },
        Ok((doc, fixture)) => {
            let p = doc.poly.p();
            match run_command(&cli, &doc, fixture.as_ref()) {
                Ok(r) => Outcome { stdout: emit_report(&r, &cli, p, cli.format), stderr: String::new(), code: r.code },
                Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: exit_for(&e) },
            }
        }
    }
}

fn load(cli: &Cli, stdin: &mut dyn Read) -> Result<(InputDocument, Option<Fixture>), String> {
    if let Command::Example { name } = &cli.command {
        let f = build_fixture(name).map_err(|e| e.to_string())?;
        return Ok((InputDocument::from_ring(&f.ring), Some(f)));
    }
    if let Some(name) = &cli.fixture {
        if cli.input.is_some() {
            return Err("--fixture and --input are exclusive".into());
        }
        let f = build_fixture(name).map_err(|e| e.to_string())?;
        return Ok((InputDocument::from_ring(&f.ring), Some(f)));
    }
    let text = match &cli.input {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?,
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| e.to_string())?;
            s
        }
    };
    let doc = parse_input(&text).map_err(|e| e.to_string())?;
    Ok((doc, None))
}

fn parse_forms(ring: &QuotientRing, text: &str) -> Result<Vec<Polynomial>, Error> {
    split_with_offsets(text, ';')
        .into_iter()
        .filter(|(_, s)| !s.trim().is_empty())
        .map(|(off, s)| {
            let f = parse_polynomial(ring.poly_ring(), s.trim(), 1, off + lead(s) + 1).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            if !f.is_homogeneous() {
                return Err(Error::NonHomogeneous(f.to_string()));
            }
            Ok(f)
        })
        .collect()
}

fn parse_linear(ring: &QuotientRing, text: &str) -> Result<Vec<u32>, Error> {
    let f = parse_forms(ring, text)?;
    match f.as_slice() {
        [l] if l.degree() == Some(1) => Ok(l.linear_coefficients()),
        _ => Err(Error::InvalidArgument(format!("{text:?} is not a single linear form"))),
    }
}

fn show_form(ring: &QuotientRing, v: &[u32]) -> String {
    ring.linear_form(v).to_string()
}

fn series_text(num: &[i64], n: usize) -> String {
    let mut s = String::new();
    for (d, &c) in num.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mag = c.abs();
        if s.is_empty() {
            if c < 0 {
                s.push('-');
            }
        } else {
            s.push_str(if c < 0 { " - " } else { " + " });
        }
        match (d, mag) {
            (0, m) => s.push_str(&m.to_string()),
            (1, 1) => s.push('t'),
            (1, m) => s.push_str(&format!("{m}*t")),
            (d, 1) => s.push_str(&format!("t^{d}")),
            (d, m) => s.push_str(&format!("{m}*t^{d}")),
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    match n {
        0 => s,
        1 => format!("({s})/(1 - t)"),
        n => format!("({s})/(1 - t)^{n}"),
    }
}

#[derive(Serialize)]
struct HilbertJson {
    numerator: Vec<i64>,
    denominator_exponent: usize,
    reduced_numerator: Vec<i64>,
    krull_dim: usize,
    multiplicity: i64,
    codim: usize,
    expansion: Vec<u64>,
}

fn hilbert_report(h: &HilbertSeries) -> (Value, String) {
    let j = HilbertJson {
        numerator: h.numerator.clone(),
        denominator_exponent: h.denominator_exponent,
        reduced_numerator: h.reduced_numerator.clone(),
        krull_dim: h.krull_dim,
        multiplicity: h.multiplicity,
        codim: h.codim,
        expansion: h.expansion.clone(),
    };
    let exp: Vec<String> = h.expansion.iter().map(|c| c.to_string()).collect();
    let text = format!(
        "series: {}\nreduced: {}\ndimension {}, multiplicity {}, codimension {}\nexpansion: {}\n",
        series_text(&h.numerator, h.denominator_exponent),
        series_text(&h.reduced_numerator, h.krull_dim),
        h.krull_dim,
        h.multiplicity,
        h.codim,
        exp.join(" ")
    );
    (json!(j), text)
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Yes => "yes",
        Verdict::No => "no",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Yes => EXIT_OK,
        Verdict::No => EXIT_NEGATIVE,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn bool_code(b: bool) -> i32 {
    if b {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report serializes")
}

fn report(command: &str, json: Value, text: String, code: i32) -> Report {
    Report { command: command.to_string(), json, text, code }
}

/// Runs a parsed command against a document.
pub fn run_command(cli: &Cli, doc: &InputDocument, fixture: Option<&Fixture>) -> Result<Report, Error> {
    let ring = match fixture {
        Some(f) => f.ring.clone(),
        None => doc.ring()?,
    };
    let (imax, dmax) = (cli.imax, cli.dmax);
    let module_name = cli.module.as_deref();
    let module = |default: &str| doc.module(&ring, module_name.unwrap_or(default));
    match &cli.command {
        Command::Hilbert => {
            let h = match module_name {
                None => ring.hilbert_series(dmax.max(0) as usize),
                Some(_) => module("R")?.hilbert_series(dmax.max(0) as usize),
            };
            let (j, t) = hilbert_report(&h);
            Ok(report("hilbert", j, t, EXIT_OK))
        }
        Command::Gb => {
            let gens: Vec<String> = ring.defining_gb().generators().iter().map(|g| g.to_string()).collect();
            let text = gens.iter().map(|g| format!("{g}\n")).collect();
            Ok(report("gb", json!({ "generators": gens }), text, EXIT_OK))
        }
        Command::Colon { j, i } => {
            let jg = parse_forms(&ring, j)?;
            let ig = parse_forms(&ring, i)?;
            let c = colon_ideal(&ring, &jg, &ig)?;
            let gens: Vec<String> = c.generators().iter().map(|g| g.to_string()).collect();
            let text = gens.iter().map(|g| format!("{g}\n")).collect();
            Ok(report("colon", json!({ "generators": gens }), text, EXIT_OK))
        }
        Command::Resolve => {
            let res = resolve(&module("k")?, imax, dmax)?;
            let mut steps = Vec::new();
            let mut text = String::new();
            for i in 1..=imax {
                if res.shifts(i).is_empty() {
                    break;
                }
                let cols: Vec<Vec<String>> =
                    res.differential(i).iter().map(|c| c.components().iter().map(|f| f.to_string()).collect()).collect();
                text.push_str(&format!("d{i}: F{i} {:?} -> F{} {:?}\n", res.shifts(i), i - 1, res.shifts(i - 1)));
                for c in &cols {
                    text.push_str(&format!("  [{}]\n", c.join(", ")));
                }
                steps.push(json!({ "i": i, "source": res.shifts(i), "target": res.shifts(i - 1), "columns": cols }));
            }
            Ok(report("resolve", json!({ "generators": res.shifts(0), "steps": steps }), text, EXIT_OK))
        }
        Command::Betti => {
            let t = betti_table(&resolve(&module("k")?, imax, dmax)?);
            Ok(report("betti", to_value(&t.to_json()), t.to_string(), EXIT_OK))
        }
        Command::Reg => {
            let t = betti_table(&resolve(&module("k")?, imax, dmax)?);
            let v = regularity_verdict(&t);
            let shown = match v.regularity {
                crate::resolution::Regularity::Exact(i32::MIN) => "exact -inf".to_string(),
                crate::resolution::Regularity::Exact(r) => format!("exact {r}"),
                crate::resolution::Regularity::AtLeast(r) => format!("at least {r}"),
                crate::resolution::Regularity::UpToBounds(r) => format!("{r} up to bounds"),
            };
            Ok(report("reg", to_value(&v), format!("regularity: {shown}\n{t}"), EXIT_OK))
        }
        Command::Koszul { method } => {
            let method: Method = method.parse()?;
            let v = koszul_verdict(&module("k")?, imax, dmax, method)?;
            let mut text = format!("verdict: {}\n", verdict_word(v.verdict));
            if let Some((i, j)) = v.witness {
                text.push_str(&format!("witness: ({i}, {j})\n"));
            }
            Ok(report("koszul", to_value(&v), text, verdict_code(v.verdict)))
        }
        Command::Linpart => {
            let res = resolve(&module("k")?, imax, dmax)?;
            let lin = linear_part(&res)?;
            let mut entries = std::collections::BTreeMap::new();
            let mut text = String::new();
            for i in 1..imax {
                for d in 0..=dmax {
                    let h = lin.homology_dims(i, d)?;
                    if h != 0 {
                        entries.insert(format!("{i},{d}"), h);
                        text.push_str(&format!("H_{i} in degree {d}: {h}\n"));
                    }
                }
            }
            if entries.is_empty() {
                text.push_str("linear part is acyclic within bounds\n");
            }
            let code = bool_code(entries.is_empty());
            Ok(report("linpart", json!({ "acyclic": entries.is_empty(), "homology": entries }), text, code))
        }
        Command::Poincare => {
            let c = poincare_hilbert_check(&module("k")?, imax, dmax)?;
            let text = format!(
                "betti totals: {:?}\nseries:       {:?}\n{}\n",
                c.lhs,
                c.rhs,
                match c.fails_at {
                    None => "identity holds within bounds".to_string(),
                    Some(d) => format!("fails at degree {d}"),
                }
            );
            Ok(report("poincare", to_value(&c), text, bool_code(c.holds)))
        }
        Command::Factorize { cert, form, r } => {
            let chain = match cert {
                Some(name) => doc.cert(name)?.chain(&ring)?,
                None => {
                    let forms: Vec<Vec<u32>> = form.iter().map(|f| parse_linear(&ring, f)).collect::<Result<_, _>>()?;
                    let colons = flag_colons(&ring, &forms)?.ok_or_else(|| Error::Precondition("the forms are not a Gröbner flag".into()))?;
                    FlagCertificate { forms, colons }.chain(&ring)?
                }
            };
            let m = module("k")?;
            let f = check_factorization(&m, &chain, *r, imax, dmax)?;
            let t = verdict_transfer_check(&m, &chain, *r, imax, dmax)?;
            let text = format!(
                "factorization: {}\nverdict over R: {}, over R/I_{r}: {} ({})\n",
                match f.witness {
                    None => "holds".to_string(),
                    Some((i, j)) => format!("fails at ({i}, {j})"),
                },
                verdict_word(t.over_ring.verdict),
                verdict_word(t.over_quotient.verdict),
                if t.consistent { "consistent" } else { "inconsistent" }
            );
            let code = bool_code(f.holds && t.consistent);
            Ok(report("factorize", json!({ "factorization": to_value(&f), "transfer": to_value(&t) }), text, code))
        }
        Command::Filtration { action } => match action {
            FiltrationAction::Verify { cert } => {
                let c = doc.cert(cert)?.filtration()?;
                let v = verify_koszul_filtration(&ring, &c)?;
                let text = match &v.failure {
                    None => format!("valid Koszul filtration with {} members\n", v.members),
                    Some(f) => format!("invalid at member {}: {}\n", f.member, f.reason),
                };
                Ok(report("filtration verify", to_value(&v), text, bool_code(v.valid)))
            }
            FiltrationAction::Subsets => {
                let c = subsets_filtration(&ring)?;
                Ok(report("filtration subsets", to_value(&c), format!("{}\n", c.to_json()), EXIT_OK))
            }
            FiltrationAction::AllLinear => {
                let c = all_linear_ideals_filtration(&ring, cli.budget)?;
                Ok(report("filtration all-linear", to_value(&c), format!("{}\n", c.to_json()), EXIT_OK))
            }
        },
        Command::Flag { action } => match action {
            FlagAction::Verify { cert } => {
                let c = doc.cert(cert)?.flag()?;
                let v = verify_groebner_flag(&ring, &c)?;
                let text = match v.index {
                    None => "valid Gröbner flag\n".to_string(),
                    Some(i) => format!("invalid at index {i}: colon is ({})\n", v.computed.clone().unwrap_or_default().join(", ")),
                };
                Ok(report("flag verify", to_value(&v), text, bool_code(v.valid)))
            }
            FlagAction::Search => {
                let s = search_groebner_flag(&ring, cli.budget)?;
                let text = match &s.flag {
                    Some(f) => format!(
                        "flag: {}\ncolons: {:?}\nnodes: {}\n",
                        f.forms.iter().map(|v| show_form(&ring, v)).collect::<Vec<_>>().join(", "),
                        f.colons,
                        s.nodes
                    ),
                    None => format!("no Gröbner flag exists; search exhausted after {} nodes\n", s.nodes),
                };
                Ok(report("flag search", to_value(&s), text, bool_code(s.flag.is_some())))
            }
            FlagAction::Conca { form } => {
                let x = parse_linear(&ring, form)?;
                let f = conca_flag(&ring, &x, cli.budget)?;
                Ok(report("flag conca", to_value(&f), format!("{}\n", f.to_json()), EXIT_OK))
            }
            FlagAction::Minmult { form, dstab } => {
                let rows: Vec<Vec<u32>> = form.iter().map(|f| parse_linear(&ring, f)).collect::<Result<_, _>>()?;
                let j = LinearIdeal::new(ring.field(), ring.nvars(), &rows)?;
                let f = minimal_multiplicity_flag(&ring, &j, *dstab)?;
                Ok(report("flag minmult", to_value(&f), format!("{}\n", f.to_json()), EXIT_OK))
            }
        },
        Command::Suite { which } => {
            let Some(f) = fixture else {
                return Err(Error::InvalidArgument("suites run on a bundled fixture; pass --fixture".into()));
            };
            let r = theorem_suite(which.name(), f, cli.seed, (imax, dmax))?;
            let mut text = String::new();
            for a in &r.assertions {
                text.push_str(&format!("{} {}", if a.pass { "PASS" } else { "FAIL" }, a.id));
                if let Some(w) = &a.witness {
                    text.push_str(&format!(" {w}"));
                }
                text.push('\n');
            }
            text.push_str(&format!("{}: {}\n", r.suite, if r.pass { "pass" } else { "fail" }));
            Ok(report(&format!("suite {}", which.name()), to_value(&r), text, bool_code(r.pass)))
        }
        Command::Example { name } => {
            let f = fixture.expect("examples load their fixture");
            let text = format!("# {}\n{}", f.note, InputDocument::from_ring(&f.ring));
            let j = json!({ "name": name, "document": InputDocument::from_ring(&f.ring).to_string(), "tags": to_value(&f.tags), "note": f.note });
            Ok(report("example", j, text, EXIT_OK))
        }
    }
}

/// Text of a Betti table, as printed by the `betti` command.
pub fn betti_text(t: &BettiTable) -> String {
    t.to_string()
}
