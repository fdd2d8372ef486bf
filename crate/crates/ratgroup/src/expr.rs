//! The element expression language.
//!
//! ```text
//! expr  := "id" | "x0" | "swap" | "fp(" int ")"
//!        | "pex(" rule ("," rule)* ")"      rule  := bits "->" bits
//!        | "pair(" expr "," expr ")" | "fix(" expr ")"
//!        | "comp(" expr "," expr ")" | "inv(" expr ")"
//!        | "raw(" path ["," path] ")"        optional second file: inverse
//!        | "glue(" piece ("," piece)* ")"   piece := bits ":" expr
//! ```
//!
//! Whitespace is ignored between tokens; `bits` may be empty (ε).
//! `comp(a, b)` is `a ∘ b`.

use std::path::Path;

use ratgroup_core::{Element, ElementError, ExchangeTable, Transducer, Word};

#[derive(Debug, thiserror::Error)]
pub enum ExprError {
    #[error("parse error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("at position {pos}: {source}")]
    Element {
        pos: usize,
        #[source]
        source: ElementError,
    },
    #[error("at position {pos}: cannot load {path}: {message}")]
    Load {
        pos: usize,
        path: String,
        message: String,
    },
}

/// Resolves the file arguments of `raw(...)`.
pub trait MachineLoader {
    fn load(&self, path: &str) -> Result<Transducer, String>;
}

/// Reads machine files from disk in the interchange format.
pub struct FsLoader;

impl MachineLoader for FsLoader {
    fn load(&self, path: &str) -> Result<Transducer, String> {
        let text = std::fs::read_to_string(Path::new(path)).map_err(|e| e.to_string())?;
        crate::format::parse(&text).map_err(|e| e.to_string())
    }
}

/// Refuses every `raw(...)`.
pub struct NoFiles;

impl MachineLoader for NoFiles {
    fn load(&self, path: &str) -> Result<Transducer, String> {
        Err(format!("file access disabled ({path})"))
    }
}

struct Parser<'a, L> {
    src: &'a str,
    pos: usize,
    loader: &'a L,
}

impl<'a, L: MachineLoader> Parser<'a, L> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ExprError> {
        if self.eat(token) {
            Ok(())
        } else {
            self.err(format!("expected '{token}'"))
        }
    }

    fn ident(&mut self) -> Result<&'a str, ExprError> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_alphanumeric())
            .unwrap_or(self.rest().len());
        if len == 0 {
            return self.err("expected an element");
        }
        let id = &self.rest()[..len];
        self.pos += len;
        Ok(id)
    }

    fn bits(&mut self) -> Result<Word, ExprError> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| c != '0' && c != '1')
            .unwrap_or(self.rest().len());
        let w = Word::parse(&self.rest()[..len]).expect("only bit characters");
        self.pos += len;
        Ok(w)
    }

    fn int(&mut self) -> Result<u64, ExprError> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        match self.rest()[..len].parse() {
            Ok(n) => {
                self.pos += len;
                Ok(n)
            }
            Err(_) => self.err("expected an integer"),
        }
    }

    fn path(&mut self) -> Result<(usize, String), ExprError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.rest().find([',', ')']).unwrap_or(self.rest().len());
        let p = self.rest()[..len].trim_end().to_string();
        if p.is_empty() {
            return self.err("expected a file path");
        }
        self.pos += len;
        Ok((start, p))
    }

    fn load(&self, at: (usize, String)) -> Result<(Transducer, String), ExprError> {
        let (pos, path) = at;
        self.loader
            .load(&path)
            .map(|t| (t, path.clone()))
            .map_err(|message| ExprError::Load { pos, path, message })
    }

    fn build<T>(pos: usize, r: Result<T, ElementError>) -> Result<T, ExprError> {
        r.map_err(|source| ExprError::Element { pos, source })
    }

    /// `item ("," item)*` up to the closing parenthesis.
    fn list<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, ExprError>,
    ) -> Result<Vec<T>, ExprError> {
        let mut out = vec![item(self)?];
        while self.eat(",") {
            out.push(item(self)?);
        }
        self.expect(")")?;
        Ok(out)
    }

    fn expr(&mut self) -> Result<Element, ExprError> {
        self.skip_ws();
        let start = self.pos;
        let name = self.ident()?;
        match name {
            "id" => return Ok(Element::identity()),
            "x0" => return Ok(Element::x0()),
            "swap" => return Ok(Element::swap()),
            _ => {}
        }
        if !matches!(
            name,
            "fp" | "pex" | "pair" | "fix" | "comp" | "inv" | "raw" | "glue"
        ) {
            self.pos = start;
            return self.err(format!("unknown element '{name}'"));
        }
        self.expect("(")?;
        match name {
            "fp" => {
                let p = self.int()?;
                self.expect(")")?;
                Self::build(start, Element::fp(p))
            }
            "pex" => {
                let rules = self.list(|p| {
                    let a = p.bits()?;
                    p.expect("->")?;
                    Ok((a, p.bits()?))
                })?;
                let table =
                    Self::build(start, ExchangeTable::new(rules).map_err(ElementError::from))?;
                Ok(Element::prefix_exchange(table))
            }
            "pair" | "comp" => {
                let a = self.expr()?;
                self.expect(",")?;
                let b = self.expr()?;
                self.expect(")")?;
                Ok(if name == "pair" {
                    Element::pair(&a, &b)
                } else {
                    Element::compose(&a, &b)
                })
            }
            "fix" => {
                let a = self.expr()?;
                self.expect(")")?;
                Ok(Element::fix(&a))
            }
            "inv" => {
                let a = self.expr()?;
                self.expect(")")?;
                Self::build(start, a.inverse())
            }
            "raw" => {
                let forward = self.path()?;
                let inverse = if self.eat(",") {
                    Some(self.path()?)
                } else {
                    None
                };
                self.expect(")")?;
                let (machine, label) = self.load(forward)?;
                let inverse = inverse.map(|p| self.load(p)).transpose()?.map(|(t, _)| t);
                Ok(Element::raw(label, machine, inverse))
            }
            "glue" => {
                let pieces = self.list(|p| {
                    let a = p.bits()?;
                    p.expect(":")?;
                    Ok((a, p.expr()?))
                })?;
                Self::build(start, Element::glue(pieces))
            }
            _ => unreachable!(),
        }
    }
}

/// Parses and builds an element; `raw(...)` files go through `loader`.
pub fn parse_with<L: MachineLoader>(src: &str, loader: &L) -> Result<Element, ExprError> {
    let mut p = Parser {
        src,
        pos: 0,
        loader,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// Parses an expression, loading `raw(...)` files from disk.
pub fn parse(src: &str) -> Result<Element, ExprError> {
    parse_with(src, &FsLoader)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> Element {
        parse_with(s, &NoFiles).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn atoms() {
        assert_eq!(el("x0").eval_prefix(&w("01")), w("10"));
        assert_eq!(el("id").eval_prefix(&w("0110")), w("0110"));
        assert_eq!(el("swap").eval_prefix(&w("0")), w("1"));
        assert_eq!(el(" fp( 2 ) ").eval_prefix(&w("0000")), w("0101"));
    }

    #[test]
    fn nested_and_whitespace() {
        let e = el("comp( fp(2) ,fp(2))");
        assert_eq!(e.eval_prefix(&w("0011")), w("0011"));
        assert!(el("fix(x0)").equals(&el("pair(x0, fix(x0))")).unwrap());
        assert!(el("comp(inv(x0),x0)").equals(&el("id")).unwrap());
        let g = el("glue(0:swap, 1:inv(swap))");
        assert!(g.equals(&el("swap")).unwrap());
        let p = el("pex(00->0, 01->10, 1->11)");
        assert!(p.equals(&el("x0")).unwrap());
        assert!(el("pex(->)").equals(&el("id")).unwrap());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "pair(x0, fix(fp(3)))",
            "comp(swap, pex(0->11, 10->0, 11->10))",
            "glue(0:x0, 1:id)",
        ] {
            let e = el(s);
            assert_eq!(e.to_string(), s);
            assert!(el(&e.to_string()).equals(&e).unwrap());
        }
    }

    #[test]
    fn errors_report_position() {
        match parse_with("pair(x0, y)", &NoFiles).unwrap_err() {
            ExprError::Syntax { pos, .. } => assert_eq!(pos, 9),
            e => panic!("{e}"),
        }
        match parse_with("pair(x0 x0)", &NoFiles).unwrap_err() {
            ExprError::Syntax { pos, message } => {
                assert_eq!(pos, 8);
                assert!(message.contains("','"));
            }
            e => panic!("{e}"),
        }
        match parse_with("comp(x0, fp(4))", &NoFiles).unwrap_err() {
            ExprError::Element { pos, source } => {
                assert_eq!(pos, 9);
                assert!(matches!(source, ElementError::NotPrime(4)));
            }
            e => panic!("{e}"),
        }
        assert!(matches!(
            parse_with("x0 x0", &NoFiles),
            Err(ExprError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse_with("pex(0->1)", &NoFiles),
            Err(ExprError::Element { .. })
        ));
        assert!(matches!(
            parse_with("raw(a.json)", &NoFiles),
            Err(ExprError::Load { pos: 4, .. })
        ));
    }
}
