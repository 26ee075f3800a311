//! Reader and writer for a small OpenQASM 2 subset: one `qreg`, the gates
//! `h s t x z cx swap`, and the custom `heis(α)` and `singlet`, whose
//! definitions the writer always emits as gate stubs.
//!
//! Gate and opaque declarations are skipped, `include` is ignored and
//! `barrier` is ignored with a warning.

use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, GateKind, Param, Qubit};
use crate::sim::Bindings;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum QasmError {
    #[error("{line}:{col}: expected {expected}")]
    SyntaxError { line: usize, col: usize, expected: String },
    #[error("{line}:{col}: unsupported gate `{name}`")]
    UnsupportedGate { name: String, line: usize, col: usize },
    #[error("{line}:{col}: qubit {index} is outside register `{reg}` of size {size}")]
    RegisterOutOfBounds { reg: String, index: usize, size: usize, line: usize, col: usize },
    #[error("{line}:{col}: unknown register `{name}`")]
    UnknownRegister { name: String, line: usize, col: usize },
    #[error("{line}:{col}: only one quantum register is supported")]
    MultipleRegisters { line: usize, col: usize },
    #[error("{line}:{col}: symbolic parameter `{name}` needs a binding (--bind {name}=VALUE)")]
    UnboundSymbolic { name: String, line: usize, col: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Real(f64),
    Int(usize),
    Str(String),
    Punct(char),
    Arrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Real(v) => format!("`{v}`"),
            Tok::Int(v) => format!("`{v}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, QasmError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, what: &str| QasmError::SyntaxError { line, col, expected: what.into() };
    while i < chars.len() {
        let ch = chars[i];
        let (l0, c0) = (line, col);
        let bump = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if ch == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if ch.is_whitespace() {
            bump(1, &mut i, &mut col);
        } else if ch == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                bump(1, &mut i, &mut col);
            }
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let s: String = chars[i..].iter().take_while(|c| c.is_ascii_alphanumeric() || **c == '_').collect();
            bump(s.chars().count(), &mut i, &mut col);
            out.push(Spanned { tok: Tok::Ident(s), line: l0, col: c0 });
        } else if ch.is_ascii_digit() || (ch == '.' && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit())) {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let mut real = false;
            if j < chars.len() && chars[j] == '.' {
                real = true;
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
            }
            if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                let mut k = j + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    real = true;
                    j = k;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
            }
            let s: String = chars[i..j].iter().collect();
            let tok = if real {
                Tok::Real(s.parse().map_err(|_| err(l0, c0, "a number"))?)
            } else {
                Tok::Int(s.parse().map_err(|_| err(l0, c0, "an integer"))?)
            };
            bump(j - i, &mut i, &mut col);
            out.push(Spanned { tok, line: l0, col: c0 });
        } else if ch == '"' {
            let s: String = chars[i + 1..].iter().take_while(|c| **c != '"' && **c != '\n').collect();
            let n = s.chars().count();
            if chars.get(i + 1 + n) != Some(&'"') {
                return Err(err(l0, c0, "closing `\"`"));
            }
            bump(n + 2, &mut i, &mut col);
            out.push(Spanned { tok: Tok::Str(s), line: l0, col: c0 });
        } else if ch == '-' && chars.get(i + 1) == Some(&'>') {
            bump(2, &mut i, &mut col);
            out.push(Spanned { tok: Tok::Arrow, line: l0, col: c0 });
        } else if "(){}[];,+-*/^".contains(ch) {
            bump(1, &mut i, &mut col);
            out.push(Spanned { tok: Tok::Punct(ch), line: l0, col: c0 });
        } else {
            return Err(err(l0, c0, "a token"));
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Result of a parse: the circuit plus warnings for ignored statements.
#[derive(Clone, Debug, PartialEq)]
pub struct Parsed {
    pub circuit: Circuit,
    pub warnings: Vec<String>,
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    bindings: &'a Bindings,
    reg: Option<(String, usize)>,
    gates: Vec<Gate>,
    warnings: Vec<String>,
}

impl Parser<'_> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, QasmError> {
        let t = self.peek();
        Err(QasmError::SyntaxError {
            line: t.line,
            col: t.col,
            expected: format!("{expected}, found {}", t.tok.describe()),
        })
    }

    fn punct(&mut self, c: char) -> Result<(), QasmError> {
        if self.peek().tok == Tok::Punct(c) {
            self.next();
            Ok(())
        } else {
            self.fail(&format!("`{c}`"))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Punct(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<Spanned, QasmError> {
        match self.peek().tok {
            Tok::Ident(_) => Ok(self.next()),
            _ => self.fail("an identifier"),
        }
    }

    fn int(&mut self) -> Result<usize, QasmError> {
        match self.peek().tok {
            Tok::Int(v) => {
                self.next();
                Ok(v)
            }
            _ => self.fail("an integer"),
        }
    }

    fn program(&mut self) -> Result<(), QasmError> {
        match &self.peek().tok {
            Tok::Ident(s) if s == "OPENQASM" => {
                self.next();
            }
            _ => return self.fail("`OPENQASM`"),
        }
        match self.peek().tok {
            Tok::Real(v) if v == 2.0 => {
                self.next();
            }
            _ => return self.fail("version `2.0`"),
        }
        self.punct(';')?;
        while self.peek().tok != Tok::Eof {
            self.statement()?;
        }
        Ok(())
    }

    fn statement(&mut self) -> Result<(), QasmError> {
        let head = self.ident()?;
        let Tok::Ident(word) = &head.tok else { unreachable!() };
        match word.as_str() {
            "include" => {
                match self.peek().tok {
                    Tok::Str(_) => {
                        self.next();
                    }
                    _ => return self.fail("a file name"),
                }
                self.punct(';')
            }
            "qreg" => {
                let name = self.ident()?;
                self.punct('[')?;
                let size = self.int()?;
                self.punct(']')?;
                self.punct(';')?;
                if self.reg.is_some() {
                    return Err(QasmError::MultipleRegisters { line: head.line, col: head.col });
                }
                let Tok::Ident(name) = name.tok else { unreachable!() };
                self.reg = Some((name, size));
                Ok(())
            }
            "creg" => {
                self.ident()?;
                self.punct('[')?;
                self.int()?;
                self.punct(']')?;
                self.punct(';')?;
                self.warnings.push(format!("{}:{}: classical register ignored", head.line, head.col));
                Ok(())
            }
            "gate" => self.skip_declaration(true),
            "opaque" => self.skip_declaration(false),
            "barrier" => {
                self.skip_to_semicolon()?;
                self.warnings.push(format!("{}:{}: barrier ignored", head.line, head.col));
                Ok(())
            }
            _ => self.gate(head),
        }
    }

    fn skip_to_semicolon(&mut self) -> Result<(), QasmError> {
        while !self.eat(';') {
            if self.peek().tok == Tok::Eof {
                return self.fail("`;`");
            }
            self.next();
        }
        Ok(())
    }

    fn skip_declaration(&mut self, body: bool) -> Result<(), QasmError> {
        self.ident()?;
        if self.eat('(')
            && !self.eat(')') {
                loop {
                    self.ident()?;
                    if self.eat(')') {
                        break;
                    }
                    self.punct(',')?;
                }
            }
        loop {
            self.ident()?;
            if !self.eat(',') {
                break;
            }
        }
        if !body {
            return self.punct(';');
        }
        self.punct('{')?;
        while !self.eat('}') {
            if self.peek().tok == Tok::Eof {
                return self.fail("`}`");
            }
            self.next();
        }
        Ok(())
    }

    fn gate(&mut self, head: Spanned) -> Result<(), QasmError> {
        let Tok::Ident(name) = head.tok else { unreachable!() };
        let kind = match name.as_str() {
            "h" => GateKind::H,
            "s" => GateKind::S,
            "t" => GateKind::T,
            "x" => GateKind::X,
            "z" => GateKind::Z,
            "cx" | "CX" => GateKind::Cnot,
            "swap" => GateKind::Swap,
            "heis" => GateKind::Heis,
            "singlet" => GateKind::Singlet,
            _ => return Err(QasmError::UnsupportedGate { name, line: head.line, col: head.col }),
        };
        let mut params = Vec::new();
        if self.eat('(')
            && !self.eat(')') {
                loop {
                    params.push(self.expr()?);
                    if self.eat(')') {
                        break;
                    }
                    self.punct(',')?;
                }
            }
        let mut qubits = Vec::new();
        loop {
            qubits.push(self.qubit()?);
            if !self.eat(',') {
                break;
            }
        }
        self.punct(';')?;

        let want_params = usize::from(kind == GateKind::Heis);
        if params.len() != want_params || qubits.len() != kind.arity() {
            return Err(QasmError::UnsupportedGate {
                name: format!("{name} with {} parameter(s) on {} qubit(s)", params.len(), qubits.len()),
                line: head.line,
                col: head.col,
            });
        }
        let param = params.pop().map(Param::Value);
        self.gates.push(Gate::new(kind, &qubits, param)?);
        Ok(())
    }

    fn qubit(&mut self) -> Result<Qubit, QasmError> {
        let name = self.ident()?;
        let Tok::Ident(reg) = &name.tok else { unreachable!() };
        let Some((declared, size)) = self.reg.clone() else {
            return Err(QasmError::UnknownRegister { name: reg.clone(), line: name.line, col: name.col });
        };
        if *reg != declared {
            return Err(QasmError::UnknownRegister { name: reg.clone(), line: name.line, col: name.col });
        }
        self.punct('[')?;
        let at = self.peek().clone();
        let index = self.int()?;
        self.punct(']')?;
        if index >= size {
            return Err(QasmError::RegisterOutOfBounds { reg: declared, index, size, line: at.line, col: at.col });
        }
        Ok(index as Qubit)
    }

    fn expr(&mut self) -> Result<f64, QasmError> {
        let mut v = self.term()?;
        loop {
            if self.eat('+') {
                v += self.term()?;
            } else if self.eat('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<f64, QasmError> {
        let mut v = self.factor()?;
        loop {
            if self.eat('*') {
                v *= self.factor()?;
            } else if self.eat('/') {
                v /= self.factor()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn factor(&mut self) -> Result<f64, QasmError> {
        if self.eat('-') {
            return Ok(-self.factor()?);
        }
        if self.eat('+') {
            return self.factor();
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(base.powf(self.factor()?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<f64, QasmError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Real(v) => {
                self.next();
                Ok(v)
            }
            Tok::Int(v) => {
                self.next();
                Ok(v as f64)
            }
            Tok::Ident(name) if name == "pi" => {
                self.next();
                Ok(std::f64::consts::PI)
            }
            Tok::Ident(name) => {
                self.next();
                self.bindings
                    .get(&name)
                    .copied()
                    .ok_or(QasmError::UnboundSymbolic { name, line: t.line, col: t.col })
            }
            Tok::Punct('(') => {
                self.next();
                let v = self.expr()?;
                self.punct(')')?;
                Ok(v)
            }
            _ => self.fail("a parameter expression"),
        }
    }
}

/// Parses a program whose parameters are all numeric.
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    parse_qasm_with(text, &Bindings::new()).map(|p| p.circuit)
}

/// Parses a program, substituting `bindings` for named parameters.
pub fn parse_qasm_with(text: &str, bindings: &Bindings) -> Result<Parsed, QasmError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, bindings, reg: None, gates: Vec::new(), warnings: Vec::new() };
    p.program()?;
    let n = p.reg.as_ref().map_or(0, |r| r.1);
    let mut circuit = Circuit::new(n);
    for g in p.gates {
        circuit.push(g)?;
    }
    Ok(Parsed { circuit, warnings: p.warnings })
}

/// `%.17g`: 17 significant digits, trailing zeros trimmed.
pub fn format_g17(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

const STUBS: &str = "\
gate heis(alpha) a,b {
  cx a,b; u1(alpha/2) b; cx a,b;
  h a; h b; cx a,b; u1(alpha/2) b; cx a,b; h a; h b;
  rx(pi/2) a; rx(pi/2) b; cx a,b; u1(alpha/2) b; cx a,b; rx(-pi/2) a; rx(-pi/2) b;
}
gate singlet a,b { x a; x b; h a; cx a,b; }
";

/// Writes `c` as OpenQASM 2 over a register `q`. Named parameters are
/// listed in a header comment and written by name.
pub fn serialize_qasm(c: &Circuit) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    if !c.params.is_empty() {
        out.push_str("// parameters (bind with --bind name=value):\n");
        for p in &c.params {
            let _ = writeln!(out, "//   real {p};");
        }
    }
    out.push_str(STUBS);
    let _ = writeln!(out, "qreg q[{}];", c.num_qubits);
    for g in c.gates() {
        let name = match g.kind {
            GateKind::Cnot => "cx".to_string(),
            k => k.name().to_ascii_lowercase(),
        };
        out.push_str(&name);
        match &g.param {
            Some(Param::Value(v)) => {
                let _ = write!(out, "({})", format_g17(*v));
            }
            Some(Param::Symbol(s)) => {
                let _ = write!(out, "({s})");
            }
            None => {}
        }
        let args: Vec<String> = g.qubits().iter().map(|q| format!("q[{q}]")).collect();
        let _ = writeln!(out, " {};", args.join(","));
    }
    out
}

/// On-disk circuit formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircuitFormat {
    Qasm,
    Json,
}

impl CircuitFormat {
    /// `.json` means JSON; anything else, including stdin, is sniffed from
    /// the content by [`CircuitFormat::detect`].
    pub fn from_path(path: &str) -> Option<CircuitFormat> {
        let lower = path.to_ascii_lowercase();
        if lower.ends_with(".json") {
            Some(CircuitFormat::Json)
        } else if lower.ends_with(".qasm") {
            Some(CircuitFormat::Qasm)
        } else {
            None
        }
    }

    pub fn detect(text: &str) -> CircuitFormat {
        if text.trim_start().starts_with('{') {
            CircuitFormat::Json
        } else {
            CircuitFormat::Qasm
        }
    }
}

/// Reads a circuit in either format. JSON keeps named parameters symbolic;
/// QASM substitutes `bindings` for them.
pub fn load_circuit(text: &str, format: CircuitFormat, bindings: &Bindings) -> Result<Parsed, QasmError> {
    match format {
        CircuitFormat::Json => Ok(Parsed { circuit: Circuit::from_json(text)?, warnings: Vec::new() }),
        CircuitFormat::Qasm => parse_qasm_with(text, bindings),
    }
}

pub fn dump_circuit(c: &Circuit, format: CircuitFormat) -> String {
    match format {
        CircuitFormat::Json => c.to_json() + "\n",
        CircuitFormat::Qasm => serialize_qasm(c),
    }
}
