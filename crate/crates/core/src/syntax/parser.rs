use thiserror::Error;

use super::{Formula, Index};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u32),
    True,
    False,
    Tilde,
    Arrow,
    Iff,
    Amp,
    Bar,
    Plus,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Num(n) => format!("number `{n}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Plus => "`+`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1usize, 1usize);
    let mut k = 0;
    let err = |line, column, message: String| ParseError {
        line,
        column,
        message,
    };
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, column);
        let mut advance = |n: usize, k: &mut usize| {
            *k += n;
            column += n;
        };
        let tok = match c {
            '\n' => {
                k += 1;
                line += 1;
                column = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(1, &mut k);
                continue;
            }
            '~' => {
                advance(1, &mut k);
                Tok::Tilde
            }
            '&' => {
                advance(1, &mut k);
                Tok::Amp
            }
            '|' => {
                advance(1, &mut k);
                Tok::Bar
            }
            '+' => {
                advance(1, &mut k);
                Tok::Plus
            }
            '(' => {
                advance(1, &mut k);
                Tok::LParen
            }
            ')' => {
                advance(1, &mut k);
                Tok::RParen
            }
            '[' => {
                advance(1, &mut k);
                Tok::LBracket
            }
            ']' => {
                advance(1, &mut k);
                Tok::RBracket
            }
            '-' => {
                if chars.get(k + 1) == Some(&'>') {
                    advance(2, &mut k);
                    Tok::Arrow
                } else {
                    return Err(err(l0, c0, "expected `->`".into()));
                }
            }
            '<' => {
                if chars.get(k + 1) == Some(&'-') && chars.get(k + 2) == Some(&'>') {
                    advance(3, &mut k);
                    Tok::Iff
                } else {
                    return Err(err(l0, c0, "expected `<->`".into()));
                }
            }
            c if c.is_ascii_digit() => {
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                column += k - start;
                let s: String = chars[start..k].iter().collect();
                let n = s
                    .parse::<u32>()
                    .map_err(|_| err(l0, c0, format!("index `{s}` out of range")))?;
                Tok::Num(n)
            }
            c if c.is_ascii_lowercase() => {
                let start = k;
                while k < chars.len()
                    && (chars[k].is_ascii_lowercase()
                        || chars[k].is_ascii_digit()
                        || chars[k] == '_')
                {
                    k += 1;
                }
                column += k - start;
                let s: String = chars[start..k].iter().collect();
                match s.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(s),
                }
            }
            other => return Err(err(l0, c0, format!("unexpected character `{other}`"))),
        };
        out.push(Spanned {
            tok,
            line: l0,
            column: c0,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(format!(
                "expected {}, found {}",
                want.describe(),
                self.peek().describe()
            )))
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.next();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.next();
            let rhs = self.implication()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.next();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.next();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn index_members(&mut self) -> Result<Index, ParseError> {
        let mut members = Vec::new();
        while let Tok::Num(n) = *self.peek() {
            members.push(n);
            self.next();
        }
        if members.is_empty() {
            return Err(self.error_here("empty index in modality"));
        }
        Ok(Index::new(members).expect("nonempty"))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.next();
                Ok(Formula::neg(self.unary()?))
            }
            Tok::LBracket => {
                self.next();
                let make: Box<dyn Fn(Formula) -> Formula> = match self.peek().clone() {
                    Tok::Amp => {
                        self.next();
                        let idx = self.index_members()?;
                        Box::new(move |f| Formula::cap(idx.clone(), f))
                    }
                    Tok::Plus => {
                        self.next();
                        let idx = self.index_members()?;
                        Box::new(move |f| Formula::ucl(idx.clone(), f))
                    }
                    Tok::Num(i) => {
                        self.next();
                        if let Tok::Num(_) = self.peek() {
                            return Err(self.error_here(
                                "a box takes a single index; use `[&..]` or `[+..]` for sets",
                            ));
                        }
                        Box::new(move |f| Formula::boxed(i, f))
                    }
                    other => {
                        return Err(self.error_here(format!(
                            "expected index, `&` or `+` after `[`, found {}",
                            other.describe()
                        )))
                    }
                };
                self.expect(Tok::RBracket)?;
                Ok(make(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.next();
                Ok(Formula::Prop(name))
            }
            Tok::True => {
                self.next();
                Ok(Formula::top())
            }
            Tok::False => {
                self.next();
                Ok(Formula::bottom())
            }
            Tok::LParen => {
                self.next();
                let f = self.iff()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            other => Err(self.error_here(format!("expected formula, found {}", other.describe()))),
        }
    }
}

/// Parses the ASCII formula grammar. Derived connectives are expanded into
/// `~` and `->`; indices are canonicalized.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.iff()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error_here(format!("unexpected {}", p.peek().describe())));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::render;

    fn p() -> Formula {
        Formula::prop("p")
    }

    #[test]
    fn spec_examples() {
        assert_eq!(parse("p").unwrap(), p());
        let idx = Index::new([1, 2]).unwrap();
        assert_eq!(
            parse("[&1 2]p -> [1]p").unwrap(),
            Formula::imp(Formula::cap(idx, p()), Formula::boxed(1, p()))
        );
        assert_eq!(
            parse("p & q").unwrap(),
            Formula::neg(Formula::imp(p(), Formula::neg(Formula::prop("q"))))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let a = parse("a -> b -> c").unwrap();
        assert_eq!(render(&a), "a -> b -> c");
        assert_eq!(parse("a & b | c").unwrap(), parse("(a & b) | c").unwrap());
        assert_eq!(parse("a | b -> c").unwrap(), parse("(a | b) -> c").unwrap());
        assert_eq!(
            parse("a -> b <-> c").unwrap(),
            parse("(a -> b) <-> c").unwrap()
        );
        assert_eq!(parse("~[1]p & q").unwrap(), parse("(~([1]p)) & q").unwrap());
        assert_eq!(parse("[+2 1][&3]x").unwrap().to_string(), "[+1 2][&3]x");
        assert_eq!(parse("true").unwrap(), Formula::top());
        assert_eq!(parse("false").unwrap(), Formula::bottom());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("[&]p").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
        assert!(e.message.contains("empty index"));
        assert!(parse("[+]p").is_err());
        assert!(parse("[1 2]p").is_err());
        let e = parse("p ->\n  (q").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse("p q").is_err());
        assert!(parse("P").is_err());
        assert!(parse("p - q").is_err());
        assert!(parse("").is_err());
    }
}
