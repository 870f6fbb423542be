//! Parser and printer for the net text format:
//!
//! ```text
//! net example
//! places s1 s2 s3
//! trans t1 u : s1 -> 2*s2
//! trans t2 v : s2 -> 0
//! marking m0 : s1 + 3*s2
//! ```
//!
//! `#` starts a comment. Places must be declared before use.

use std::fmt;

use thiserror::Error;

use crate::multiset::Multiset;
use crate::net::{NetError, PtNet};

/// A net together with its named markings, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NetDocument {
    pub name: Option<String>,
    pub net: PtNet,
    pub markings: Vec<(String, Multiset)>,
}

impl NetDocument {
    pub fn marking(&self, name: &str) -> Option<&Multiset> {
        self.markings.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("place `{0}` is not declared")]
    UndeclaredPlace(String),
    #[error("transition `{0}` has an empty preset")]
    EmptyPreset(String),
    #[error("{what} `{name}` declared twice")]
    Duplicate { what: &'static str, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Id(String),
    Nat(u32),
    Colon,
    Plus,
    Star,
    Arrow,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Id(s) => write!(f, "`{s}`"),
            Tok::Nat(n) => write!(f, "`{n}`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Arrow => f.write_str("`->`"),
        }
    }
}

fn err(line: usize, column: usize, kind: ErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    err(line, column, ErrorKind::Syntax(msg.into()))
}

/// Splits one line into tokens with their 1-based columns.
fn lex(line_no: usize, line: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            '#' => break,
            c if c.is_whitespace() => i += 1,
            ':' => {
                out.push((col, Tok::Colon));
                i += 1;
            }
            '+' => {
                out.push((col, Tok::Plus));
                i += 1;
            }
            '*' => {
                out.push((col, Tok::Star));
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((col, Tok::Arrow));
                i += 2;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let n = digits
                    .parse()
                    .map_err(|_| syntax(line_no, col, format!("number `{digits}` is too large")))?;
                out.push((col, Tok::Nat(n)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((col, Tok::Id(chars[start..i].iter().collect())));
            }
            c => return Err(syntax(line_no, col, format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

struct Line<'a> {
    no: usize,
    toks: &'a [(usize, Tok)],
    pos: usize,
    end_col: usize,
}

impl Line<'_> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn id(&mut self, what: &str) -> Result<(usize, String), ParseError> {
        match self.toks.get(self.pos) {
            Some((c, Tok::Id(s))) => {
                self.pos += 1;
                Ok((*c, s.clone()))
            }
            Some((c, t)) => Err(syntax(self.no, *c, format!("expected {what}, found {t}"))),
            None => Err(syntax(self.no, self.end_col, format!("expected {what}, found end of line"))),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        match self.toks.get(self.pos) {
            Some((_, t)) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            Some((c, t)) => Err(syntax(self.no, *c, format!("expected {tok}, found {t}"))),
            None => Err(syntax(self.no, self.end_col, format!("expected {tok}, found end of line"))),
        }
    }

    fn end(&self) -> Result<(), ParseError> {
        match self.toks.get(self.pos) {
            None => Ok(()),
            Some((c, t)) => Err(syntax(self.no, *c, format!("unexpected {t}"))),
        }
    }

    /// `0` or `term (+ term)*`, stopping before `->` or the end of the line.
    fn sum(&mut self, net: &PtNet) -> Result<Multiset, ParseError> {
        let mut m = Multiset::empty();
        if self.peek() == Some(&Tok::Nat(0)) && self.toks.get(self.pos + 1).map(|t| &t.1) != Some(&Tok::Star)
        {
            self.pos += 1;
            return Ok(m);
        }
        loop {
            let mut n = 1;
            if let Some(&Tok::Nat(k)) = self.peek() {
                n = k;
                self.pos += 1;
                self.expect(Tok::Star)?;
            }
            let (col, place) = self.id("a place")?;
            let p = net
                .place_by_name(&place)
                .ok_or_else(|| err(self.no, col, ErrorKind::UndeclaredPlace(place.clone())))?;
            m.add(p, n);
            if self.peek() == Some(&Tok::Plus) {
                self.pos += 1;
            } else {
                return Ok(m);
            }
        }
    }
}

/// Parses a whole document. Errors carry 1-based line and column numbers.
pub fn parse_net(text: &str) -> Result<NetDocument, ParseError> {
    let mut doc = NetDocument::default();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let toks = lex(no, raw)?;
        if toks.is_empty() {
            continue;
        }
        let mut line = Line {
            no,
            toks: &toks,
            pos: 0,
            end_col: raw.chars().count() + 1,
        };
        let (kw_col, kw) = line.id("a keyword")?;
        match kw.as_str() {
            "net" => {
                let (col, name) = line.id("a net name")?;
                if doc.name.is_some() {
                    return Err(err(no, col, ErrorKind::Duplicate { what: "net name", name }));
                }
                doc.name = Some(name);
            }
            "places" => {
                loop {
                    let (col, name) = line.id("a place")?;
                    if doc.net.add_place(&name).is_err() {
                        return Err(err(no, col, ErrorKind::Duplicate { what: "place", name }));
                    }
                    if line.peek().is_none() {
                        break;
                    }
                }
            }
            "trans" => {
                let (col, name) = line.id("a transition name")?;
                let (_, label) = line.id("a label")?;
                line.expect(Tok::Colon)?;
                let pre_col = line.col();
                if line.peek() == Some(&Tok::Arrow) {
                    return Err(err(no, pre_col, ErrorKind::EmptyPreset(name)));
                }
                let pre = line.sum(&doc.net)?;
                if pre.is_empty() {
                    return Err(err(no, pre_col, ErrorKind::EmptyPreset(name)));
                }
                line.expect(Tok::Arrow)?;
                let post = line.sum(&doc.net)?;
                line.end()?;
                match doc.net.add_transition(&name, &label, pre, post) {
                    Ok(_) => {}
                    Err(NetError::DuplicateTransition(_)) => {
                        return Err(err(no, col, ErrorKind::Duplicate { what: "transition", name }))
                    }
                    Err(e) => return Err(syntax(no, col, e.to_string())),
                }
            }
            "marking" => {
                let (col, name) = line.id("a marking name")?;
                if doc.marking(&name).is_some() {
                    return Err(err(no, col, ErrorKind::Duplicate { what: "marking", name }));
                }
                line.expect(Tok::Colon)?;
                let m = line.sum(&doc.net)?;
                doc.markings.push((name, m));
            }
            other => return Err(syntax(no, kw_col, format!("unknown keyword `{other}`"))),
        }
        line.end()?;
    }
    Ok(doc)
}

impl fmt::Display for NetDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let net = &self.net;
        if let Some(name) = &self.name {
            writeln!(f, "net {name}")?;
        }
        if net.place_count() > 0 {
            let names: Vec<&str> = net.places().map(|p| net.place_name(p)).collect();
            writeln!(f, "places {}", names.join(" "))?;
        }
        for t in net.transitions() {
            writeln!(
                f,
                "trans {} {} : {} -> {}",
                t.name,
                net.label_name(t.label),
                net.show_marking(&t.pre),
                net.show_marking(&t.post)
            )?;
        }
        for (name, m) in &self.markings {
            writeln!(f, "marking {name} : {}", net.show_marking(m))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiset::PlaceId;
    use proptest::prelude::*;

    fn place(doc: &NetDocument, name: &str) -> PlaceId {
        doc.net.place_by_name(name).expect("declared")
    }

    const SPLIT: &str = "
        # two places feed a third
        net split
        places s1 s2 s3
        trans t1 u : s1 -> 2*s2
        trans t2 v : s2 -> s3   # comment after a rule
        marking m0 : s1 + 3*s2
    ";

    #[test]
    fn parses_a_document() {
        let doc = parse_net(SPLIT).unwrap();
        assert_eq!(doc.name.as_deref(), Some("split"));
        assert_eq!(doc.net, crate::corpus::split());
        assert_eq!(doc.marking("m0"), Some(&crate::corpus::split_m0()));
        let t2 = &doc.net.transitions()[1];
        assert_eq!((t2.name.as_str(), doc.net.label_name(t2.label)), ("t2", "v"));
    }

    #[test]
    fn empty_postset_and_zero_marking() {
        let doc = parse_net("places s1 s2 s3\ntrans t1 a : s1 -> s2\ntrans t4 a:s3->0\nmarking z : 0").unwrap();
        assert_eq!(doc.net, crate::corpus::two_a());
        assert!(doc.marking("z").unwrap().is_empty());
    }

    #[test]
    fn repeated_terms_add_up() {
        let doc = parse_net("places s\nmarking m : s + 2*s").unwrap();
        assert_eq!(doc.marking("m").unwrap().get(place(&doc, "s")), 3);
    }

    fn kind_at(text: &str) -> (usize, usize, ErrorKind) {
        let e = parse_net(text).unwrap_err();
        (e.line, e.column, e.kind)
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            kind_at("places s1\ntrans t x : -> s1"),
            (2, 13, ErrorKind::EmptyPreset("t".into()))
        );
        assert_eq!(
            kind_at("places s1\ntrans t x : 0 -> s1"),
            (2, 13, ErrorKind::EmptyPreset("t".into()))
        );
        assert_eq!(
            kind_at("places s1\nmarking m : s1 + s2"),
            (2, 18, ErrorKind::UndeclaredPlace("s2".into()))
        );
        assert_eq!(
            kind_at("places s1 s1"),
            (1, 11, ErrorKind::Duplicate { what: "place", name: "s1".into() })
        );
        assert_eq!(
            kind_at("places s\ntrans t a : s -> s\ntrans t b : s -> 0"),
            (3, 7, ErrorKind::Duplicate { what: "transition", name: "t".into() })
        );
        assert_eq!(
            kind_at("places s\nmarking m : s\nmarking m : 0"),
            (3, 9, ErrorKind::Duplicate { what: "marking", name: "m".into() })
        );
        assert_eq!(kind_at("places s\ntrans t a : s -> s s").0, 2);
        assert_eq!(kind_at("places s\nmarking m : s $").1, 15);
        assert!(matches!(kind_at("nets x").2, ErrorKind::Syntax(_)));
        assert!(matches!(kind_at("places").2, ErrorKind::Syntax(_)));
        assert!(matches!(kind_at("places s\nmarking m s").2, ErrorKind::Syntax(_)));
    }

    #[test]
    fn printed_form() {
        let doc = parse_net(SPLIT).unwrap();
        assert_eq!(
            doc.to_string(),
            "net split\nplaces s1 s2 s3\ntrans t1 u : s1 -> 2*s2\ntrans t2 v : s2 -> s3\nmarking m0 : s1 + 3*s2\n"
        );
    }

    fn arb_document() -> impl Strategy<Value = NetDocument> {
        let counts = |n: usize| prop::collection::vec(0u32..3, n);
        (1usize..5)
            .prop_flat_map(move |places| {
                (
                    Just(places),
                    prop::collection::vec((counts(places), counts(places), 0usize..3), 0..4),
                    prop::collection::vec(counts(places), 0..3),
                    any::<bool>(),
                )
            })
            .prop_map(|(places, trans, marks, named)| {
                let mut net = PtNet::new();
                for p in 0..places {
                    net.add_place(&format!("p_{p}")).unwrap();
                }
                for (i, (mut pre, post, label)) in trans.into_iter().enumerate() {
                    if pre.iter().all(|&c| c == 0) {
                        pre[0] = 1;
                    }
                    let name = format!("T{i}");
                    let label = ["a", "b", "tau"][label];
                    net.add_transition(&name, label, Multiset::from_counts(pre), Multiset::from_counts(post))
                        .unwrap();
                }
                NetDocument {
                    name: named.then(|| "n".to_string()),
                    net,
                    markings: marks
                        .into_iter()
                        .enumerate()
                        .map(|(i, c)| (format!("m{i}"), Multiset::from_counts(c)))
                        .collect(),
                }
            })
    }

    proptest! {
        #[test]
        fn print_then_parse_round_trips(doc in arb_document()) {
            let printed = doc.to_string();
            let back = parse_net(&printed).unwrap();
            prop_assert_eq!(&back, &doc);
            prop_assert_eq!(back.to_string(), printed);
        }
    }
}
