//! Line-oriented text formats for concepts.
//!
//! ```text
//! p cnf <n> <m>            DIMACS CNF; clauses are signed 1-based literals ended by 0
//! dl <n> <k>               decision list header, then one item per line:
//! 1 -3 -> 1                  signed literals of the term, `->`, output bit
//! true -> 0                  the constant-true default term
//! conj <n>                 conjunction header, then one line of signed literals
//! monconj <n>              monotone conjunction header, then one line of variables
//! const <n> <bit>          constant function
//! ```
//!
//! Blank lines and lines starting with `#` are ignored everywhere; DIMACS
//! files additionally accept `c` comment lines.

use super::{
    AnyConcept, Clause, CnfFormula, Conjunction, DecisionList, DlItem, Literal,
    MonotoneConjunction, Term,
};
use crate::error::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_usize(line: usize, tok: Option<&str>, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} {tok:?}")))
}

fn parse_literals(line: usize, s: &str, n: usize) -> Result<Vec<Literal>> {
    let s = s.trim();
    if s.is_empty() || s == "true" {
        return Ok(Vec::new());
    }
    s.split_whitespace()
        .map(|tok| {
            let v: i64 = tok
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid literal {tok:?}")))?;
            if v == 0 || v.unsigned_abs() as usize > n {
                return Err(Error::parse(
                    line,
                    format!("literal {v} out of range for {n} variables"),
                ));
            }
            Literal::from_signed(v).map_err(|e| Error::parse(line, e.to_string()))
        })
        .collect()
}

fn at_line<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::parse(line, other.to_string()),
    })
}

pub fn parse_cnf(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();
    let mut last_line = 0;
    for (line, l) in content_lines(text) {
        last_line = line;
        if l.starts_with('c') && (l.len() == 1 || l.as_bytes()[1].is_ascii_whitespace()) {
            continue;
        }
        if l.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse(line, "duplicate problem line"));
            }
            let mut toks = l.split_whitespace();
            toks.next();
            if toks.next() != Some("cnf") {
                return Err(Error::parse(line, "expected `p cnf <vars> <clauses>`"));
            }
            let n = parse_usize(line, toks.next(), "variable count")?;
            let m = parse_usize(line, toks.next(), "clause count")?;
            header = Some((n, m, line));
            continue;
        }
        let (n, _, _) = header.ok_or_else(|| Error::parse(line, "clause before problem line"))?;
        for tok in l.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid literal {tok:?}")))?;
            if v == 0 {
                let lits = std::mem::take(&mut pending);
                clauses.push(at_line(line, Clause::new(lits))?);
            } else {
                if v.unsigned_abs() as usize > n {
                    return Err(Error::parse(
                        line,
                        format!("literal {v} out of range for {n} variables"),
                    ));
                }
                pending
                    .push(Literal::from_signed(v).map_err(|e| Error::parse(line, e.to_string()))?);
            }
        }
    }
    let (n, m, hline) =
        header.ok_or_else(|| Error::parse(last_line.max(1), "missing problem line"))?;
    if !pending.is_empty() {
        return Err(Error::parse(
            last_line,
            "last clause is not terminated by 0",
        ));
    }
    if clauses.len() != m {
        return Err(Error::parse(
            hline,
            format!("problem line declares {m} clauses, found {}", clauses.len()),
        ));
    }
    at_line(hline, CnfFormula::new(n, clauses))
}

pub fn parse_decision_list(text: &str) -> Result<DecisionList> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty decision-list file"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("dl") {
        return Err(Error::parse(hline, "expected `dl <n> <k>` header"));
    }
    let n = parse_usize(hline, toks.next(), "dimension")?;
    let k = parse_usize(hline, toks.next(), "width bound")?;
    let mut items = Vec::new();
    let mut last_line = hline;
    for (line, l) in lines {
        last_line = line;
        let (lhs, rhs) = l
            .split_once("->")
            .ok_or_else(|| Error::parse(line, "expected `<literals> -> <bit>`"))?;
        let output = match rhs.trim() {
            "0" => false,
            "1" => true,
            other => return Err(Error::parse(line, format!("invalid output bit {other:?}"))),
        };
        let lits = parse_literals(line, lhs, n)?;
        let term = at_line(line, Term::new(lits))?;
        if term.width() > k {
            return Err(Error::parse(
                line,
                format!("term of width {} exceeds width bound {k}", term.width()),
            ));
        }
        items.push(DlItem { term, output });
    }
    at_line(last_line, DecisionList::new(n, k, items))
}

fn parse_conj_body<'a>(
    mut lines: impl Iterator<Item = (usize, &'a str)>,
    hline: usize,
) -> Result<(usize, &'a str)> {
    let body = lines.next().unwrap_or((hline, ""));
    if let Some((line, _)) = lines.next() {
        return Err(Error::parse(
            line,
            "unexpected extra line after conjunction",
        ));
    }
    Ok(body)
}

/// Parses any concept, dispatching on the first non-comment line.
pub fn parse_concept(text: &str) -> Result<AnyConcept> {
    let (hline, header) = content_lines(text)
        .find(|(_, l)| !(l.starts_with('c') && (l.len() == 1 || l.as_bytes()[1] == b' ')))
        .ok_or_else(|| Error::parse(1, "empty concept file"))?;
    let mut toks = header.split_whitespace();
    match toks.next() {
        Some("p") => parse_cnf(text).map(AnyConcept::Cnf),
        Some("dl") => parse_decision_list(text).map(AnyConcept::DecisionList),
        Some("conj") => {
            let n = parse_usize(hline, toks.next(), "dimension")?;
            let rest = content_lines(text).skip_while(|(l, _)| *l <= hline);
            let (line, body) = parse_conj_body(rest, hline)?;
            let lits = parse_literals(line, body, n)?;
            let term = at_line(line, Term::new(lits))?;
            at_line(hline, Conjunction::new(n, term)).map(AnyConcept::Conjunction)
        }
        Some("monconj") => {
            let n = parse_usize(hline, toks.next(), "dimension")?;
            let rest = content_lines(text).skip_while(|(l, _)| *l <= hline);
            let (line, body) = parse_conj_body(rest, hline)?;
            let lits = parse_literals(line, body, n)?;
            if lits.iter().any(|l| l.negated) {
                return Err(Error::parse(
                    line,
                    "monotone conjunction with negated literal",
                ));
            }
            let mut vars: Vec<usize> = lits.iter().map(|l| l.var).collect();
            let before = vars.len();
            vars.sort_unstable();
            vars.dedup();
            if vars.len() != before {
                return Err(Error::parse(line, "variable repeated in conjunction"));
            }
            at_line(hline, MonotoneConjunction::new(n, vars)).map(AnyConcept::Monotone)
        }
        Some("const") => {
            let n = parse_usize(hline, toks.next(), "dimension")?;
            let value = match toks.next() {
                Some("0") => false,
                Some("1") => true,
                other => return Err(Error::parse(hline, format!("invalid constant {other:?}"))),
            };
            if n == 0 || n > crate::hypercube::MAX_DIM {
                return Err(Error::parse(hline, format!("invalid dimension {n}")));
            }
            Ok(AnyConcept::Constant { n, value })
        }
        Some(other) => Err(Error::parse(
            hline,
            format!("unknown concept header {other:?}"),
        )),
        None => Err(Error::parse(hline, "empty header")),
    }
}

fn literals_to_text(lits: &[Literal]) -> String {
    if lits.is_empty() {
        return "true".to_string();
    }
    lits.iter()
        .map(|l| l.to_signed().to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub(super) fn cnf_to_text(f: &CnfFormula) -> String {
    let mut s = format!("p cnf {} {}\n", f.n, f.clauses.len());
    for c in &f.clauses {
        for l in c.literals() {
            s.push_str(&l.to_signed().to_string());
            s.push(' ');
        }
        s.push_str("0\n");
    }
    s
}

pub(super) fn dl_to_text(d: &DecisionList) -> String {
    let mut s = format!("dl {} {}\n", d.n, d.k);
    for it in &d.items {
        s.push_str(&literals_to_text(it.term.literals()));
        s.push_str(" -> ");
        s.push(if it.output { '1' } else { '0' });
        s.push('\n');
    }
    s
}

pub(super) fn conj_to_text(c: &Conjunction) -> String {
    format!("conj {}\n{}\n", c.n, literals_to_text(c.term.literals()))
}

pub(super) fn monconj_to_text(m: &MonotoneConjunction) -> String {
    let vars: Vec<String> = m.vars().iter().map(|v| (v + 1).to_string()).collect();
    let body = if vars.is_empty() {
        "true".to_string()
    } else {
        vars.join(" ")
    };
    format!("monconj {}\n{}\n", m.n, body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::Concept;

    #[test]
    fn dimacs_parses_and_prints() {
        let text = "c example\np cnf 5 3\n1 2 0\n-3 4 0\n-5 0\n";
        let f = parse_cnf(text).unwrap();
        assert_eq!(f.clauses().len(), 3);
        assert_eq!(f.width(), 2);
        assert_eq!(cnf_to_text(&f), "p cnf 5 3\n1 2 0\n-3 4 0\n-5 0\n");
        assert_eq!(parse_concept(text).unwrap(), AnyConcept::Cnf(f));
    }

    #[test]
    fn dimacs_clause_may_span_lines() {
        let f = parse_cnf("p cnf 3 1\n1\n-2 3 0\n").unwrap();
        assert_eq!(f.clauses()[0].width(), 3);
    }

    #[test]
    fn dimacs_errors_are_line_precise() {
        let err = parse_cnf("p cnf 3 1\n1 x 0\n").unwrap_err();
        assert_eq!(err, Error::parse(2, "invalid literal \"x\""));
        let err = parse_cnf("p cnf 3 2\n1 2 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_cnf("p cnf 3 1\n1 4 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_cnf("p cnf 3 1\n1 -1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_cnf("1 2 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn decision_list_round_trip() {
        let text = "# target\ndl 4 2\n1 -2 -> 1\n3 -> 0\ntrue -> 1\n";
        let d = parse_decision_list(text).unwrap();
        assert_eq!(d.len(), 3);
        let printed = dl_to_text(&d);
        assert_eq!(printed, "dl 4 2\n1 -2 -> 1\n3 -> 0\ntrue -> 1\n");
        assert_eq!(parse_decision_list(&printed).unwrap(), d);
    }

    #[test]
    fn decision_list_errors() {
        let err = parse_decision_list("dl 4 1\n1 -2 -> 1\ntrue -> 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_decision_list("dl 4 1\n1 -> 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_decision_list("dl 4 1\n1 -> 2\ntrue -> 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn other_concepts() {
        let c = parse_concept("conj 4\n1 -3\n").unwrap();
        assert!(c.eval_raw(0b0001));
        assert!(!c.eval_raw(0b0101));
        assert_eq!(c.to_text(), "conj 4\n1 -3\n");
        let m = parse_concept("monconj 6\n2 5\n").unwrap();
        assert_eq!(m.to_text(), "monconj 6\n2 5\n");
        assert!(parse_concept("monconj 6\n-2\n").is_err());
        let k = parse_concept("const 3 1\n").unwrap();
        assert!(k.eval_raw(0));
        assert!(parse_concept("mystery 3\n").is_err());
    }
}
