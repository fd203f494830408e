use std::collections::HashSet;

use crate::network::Term;

use super::lexer::{tokenize, Tok, Token};
use super::{Arg, Directive, DslError, Expr, LawSpec, ModelDocument, ParamDecl, ReactionStmt, SpeciesDecl};

struct Line<'a> {
    no: usize,
    toks: &'a [Token],
    pos: usize,
    /// Column just past the end of the line, for "expected ..." at end of input.
    end_col: usize,
}

impl<'a> Line<'a> {
    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.column)
    }

    fn err(&self, message: impl Into<String>) -> DslError {
        DslError::Syntax { line: self.no, column: self.column(), message: message.into() }
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn next(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos).map(|t| &t.tok);
        self.pos += 1;
        t
    }

    fn sym(&mut self, c: char) -> Result<(), DslError> {
        match self.peek() {
            Some(Tok::Sym(s)) if *s == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected `{c}`"))),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, DslError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    /// An identifier usable as a model, species, parameter or reaction name.
    fn name(&mut self, what: &str) -> Result<String, DslError> {
        let col = self.column();
        let id = self.ident(what)?;
        if id == "alpha" {
            return Err(DslError::Syntax { line: self.no, column: col, message: "`alpha` is reserved".into() });
        }
        Ok(id)
    }

    fn number(&mut self) -> Result<f64, DslError> {
        match self.peek() {
            Some(Tok::Number(s)) => {
                let v: f64 = s.parse().map_err(|_| self.err("malformed number"))?;
                if !v.is_finite() {
                    return Err(self.err("number out of range"));
                }
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err("expected a number")),
        }
    }

    fn integer(&mut self) -> Result<u64, DslError> {
        match self.peek() {
            Some(Tok::Number(s)) => {
                let v: u64 = s.parse().map_err(|_| self.err("expected a non-negative integer"))?;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err("expected a non-negative integer")),
        }
    }

    fn finish(&self) -> Result<(), DslError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let v = self.number()?;
        let scaled = |line: &mut Self, ctor: fn(f64) -> Expr| -> Result<Expr, DslError> {
            let col = line.column();
            match line.ident("`alpha`")?.as_str() {
                "alpha" => Ok(ctor(v)),
                _ => Err(DslError::Syntax { line: line.no, column: col, message: "expected `alpha`".into() }),
            }
        };
        if self.eat_sym('*') {
            scaled(self, Expr::TimesAlpha)
        } else if self.eat_sym('/') {
            scaled(self, Expr::PerAlpha)
        } else {
            Ok(Expr::Number(v))
        }
    }

    fn arg(&mut self) -> Result<Arg, DslError> {
        match self.peek() {
            Some(Tok::Ident(_)) => Ok(Arg::Param(self.name("a parameter name")?)),
            Some(Tok::Number(_)) => Ok(Arg::Value(self.expr()?)),
            _ => Err(self.err("expected a parameter name or a number")),
        }
    }

    fn term(&mut self) -> Result<Term, DslError> {
        let coeff = if matches!(self.peek(), Some(Tok::Number(_))) {
            let col = self.column();
            let k = self.integer()?;
            if !(1..=2).contains(&k) {
                return Err(DslError::Syntax {
                    line: self.no,
                    column: col,
                    message: format!("stoichiometric coefficient {k} not supported (use 1 or 2)"),
                });
            }
            self.sym('*')?;
            k as u32
        } else {
            1
        };
        Ok(Term::new(self.name("a species name")?, coeff))
    }

    fn terms(&mut self) -> Result<Vec<Term>, DslError> {
        let mut out = vec![self.term()?];
        while self.eat_sym('+') {
            out.push(self.term()?);
        }
        Ok(out)
    }

    /// A reaction side: `0` for nothing, otherwise `+`-separated terms.
    fn side(&mut self) -> Result<Vec<Term>, DslError> {
        if let Some(Tok::Number(s)) = self.peek() {
            if s == "0" {
                self.pos += 1;
                return Ok(Vec::new());
            }
        }
        self.terms()
    }

    fn law(&mut self) -> Result<LawSpec, DslError> {
        let (line, column) = (self.no, self.column());
        let name = self.ident("a rate law")?;
        if name == "inf" {
            return Ok(LawSpec::Immediate);
        }
        let arity = match name.as_str() {
            "ma" => 1,
            "mm" => 2,
            "hill" => 3,
            _ => return Err(DslError::UnknownRateLaw { line, column, name }),
        };
        self.sym('(')?;
        let mut args = vec![self.arg()?];
        while self.eat_sym(',') {
            args.push(self.arg()?);
        }
        if args.len() != arity {
            return Err(DslError::Syntax {
                line,
                column,
                message: format!("`{name}` takes {arity} argument(s), got {}", args.len()),
            });
        }
        self.sym(')')?;
        let mut it = args.into_iter();
        let mut next = || it.next().expect("arity checked");
        Ok(match name.as_str() {
            "ma" => LawSpec::MassAction(next()),
            "mm" => LawSpec::MichaelisMenten { vmax: next(), km: next() },
            _ => LawSpec::Hill { kms: next(), j: next(), n: next() },
        })
    }
}

enum Value {
    Arg(Arg),
    Name(String),
}

/// `key=value` pairs of an unpack directive.
fn key_values(line: &mut Line, allowed_args: &[&str], allowed_names: &[&str]) -> Result<Vec<(String, Value)>, DslError> {
    line.sym('(')?;
    let mut out: Vec<(String, Value)> = Vec::new();
    loop {
        let col = line.column();
        let key = line.ident("a key")?;
        if out.iter().any(|(k, _)| *k == key) {
            return Err(DslError::Duplicate { line: line.no, column: col, what: "key", id: key });
        }
        line.sym('=')?;
        let value = if allowed_args.contains(&key.as_str()) {
            Value::Arg(line.arg()?)
        } else if allowed_names.contains(&key.as_str()) {
            Value::Name(line.name("a species name")?)
        } else {
            return Err(DslError::Syntax { line: line.no, column: col, message: format!("unknown key `{key}`") });
        };
        out.push((key, value));
        if !line.eat_sym(',') {
            break;
        }
    }
    line.sym(')')?;
    for required in allowed_args {
        if !out.iter().any(|(k, _)| k == required) {
            return Err(line.err(format!("missing key `{required}`")));
        }
    }
    Ok(out)
}

fn take_arg(kv: &mut Vec<(String, Value)>, key: &str) -> Arg {
    let i = kv.iter().position(|(k, _)| k == key).expect("required key present");
    match kv.remove(i).1 {
        Value::Arg(a) => a,
        Value::Name(_) => unreachable!("argument keys hold arguments"),
    }
}

fn take_name(kv: &mut Vec<(String, Value)>, key: &str) -> Option<String> {
    let i = kv.iter().position(|(k, _)| k == key)?;
    match kv.remove(i).1 {
        Value::Name(n) => Some(n),
        Value::Arg(_) => unreachable!("name keys hold names"),
    }
}

/// Parses a `.rxn` document. LF and CRLF line endings are accepted.
pub fn parse_model(text: &str) -> Result<ModelDocument, DslError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut doc: Option<ModelDocument> = None;
    let mut species = HashSet::new();
    let mut params = HashSet::new();
    let mut reactions = HashSet::new();
    let mut unpacked = HashSet::new();

    for (idx, raw) in text.split('\n').enumerate() {
        let no = idx + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let toks = tokenize(raw, no)?;
        if toks.is_empty() {
            continue;
        }
        let mut line = Line { no, toks: &toks, pos: 0, end_col: raw.chars().count() + 1 };
        let kw_col = line.column();
        let keyword = line.ident("a statement keyword")?;

        let Some(d) = doc.as_mut() else {
            if keyword != "model" {
                return Err(DslError::Syntax { line: no, column: kw_col, message: "expected model header".into() });
            }
            let name = line.name("a model name")?;
            line.finish()?;
            doc = Some(ModelDocument::new(name));
            continue;
        };

        match keyword.as_str() {
            "model" => return Err(DslError::Duplicate { line: no, column: kw_col, what: "model header", id: d.name.clone() }),
            "alpha" => {
                if d.alpha.is_some() {
                    return Err(DslError::Duplicate { line: no, column: kw_col, what: "declaration", id: "alpha".into() });
                }
                line.sym('=')?;
                let col = line.column();
                let v = line.number()?;
                if !(v > 0.0) {
                    return Err(DslError::Syntax { line: no, column: col, message: "alpha must be positive".into() });
                }
                d.alpha = Some(v);
            }
            "species" => {
                let col = line.column();
                let name = line.name("a species name")?;
                if !species.insert(name.clone()) {
                    return Err(DslError::Duplicate { line: no, column: col, what: "species", id: name });
                }
                line.sym('=')?;
                let initial = line.integer()?;
                d.species.push(SpeciesDecl { name, initial });
            }
            "param" => {
                let col = line.column();
                let name = line.name("a parameter name")?;
                if !params.insert(name.clone()) {
                    return Err(DslError::Duplicate { line: no, column: col, what: "parameter", id: name });
                }
                line.sym('=')?;
                let value = line.expr()?;
                d.params.push(ParamDecl { name, value });
            }
            "reaction" => {
                let col = line.column();
                let id = line.name("a reaction id")?;
                if !reactions.insert(id.clone()) {
                    return Err(DslError::Duplicate { line: no, column: col, what: "reaction", id });
                }
                line.sym(':')?;
                let reactants = line.side()?;
                if line.next() != Some(&Tok::Arrow) {
                    line.pos -= 1;
                    return Err(line.err("expected `->`"));
                }
                let products = line.side()?;
                line.sym('@')?;
                let law = line.law()?;
                d.reactions.push(ReactionStmt { id, reactants, products, law });
            }
            "unpack" => {
                let col = line.column();
                let reaction = line.name("a reaction id")?;
                if !unpacked.insert(reaction.clone()) {
                    return Err(DslError::Duplicate { line: no, column: col, what: "unpack directive for", id: reaction });
                }
                let tcol = line.column();
                let template = line.ident("a template name")?;
                let directive = match template.as_str() {
                    "mm" => {
                        let mut kv = key_values(&mut line, &["Etot", "rho"], &["enzyme"])?;
                        Directive::UnpackMm {
                            reaction,
                            etot: take_arg(&mut kv, "Etot"),
                            rho: take_arg(&mut kv, "rho"),
                            enzyme: take_name(&mut kv, "enzyme"),
                        }
                    }
                    "hill" => {
                        let mut kv = key_values(&mut line, &["K1", "s1", "s2"], &["gene", "dimer", "complex"])?;
                        Directive::UnpackHill {
                            reaction,
                            k1: take_arg(&mut kv, "K1"),
                            s1: take_arg(&mut kv, "s1"),
                            s2: take_arg(&mut kv, "s2"),
                            gene: take_name(&mut kv, "gene"),
                            dimer: take_name(&mut kv, "dimer"),
                            complex: take_name(&mut kv, "complex"),
                        }
                    }
                    _ => {
                        return Err(DslError::Syntax {
                            line: no,
                            column: tcol,
                            message: format!("unknown template `{template}`"),
                        })
                    }
                };
                d.directives.push(directive);
            }
            "conserve" => {
                let terms = line.terms()?;
                line.sym('=')?;
                let total = line.arg()?;
                d.directives.push(Directive::Conserve { terms, total });
            }
            other => return Err(DslError::Syntax { line: no, column: kw_col, message: format!("unknown statement `{other}`") }),
        }
        line.finish()?;
    }
    doc.ok_or(DslError::Syntax { line: 1, column: 1, message: "expected model header".into() })
}
