//! Text formats: DIMACS CNF, the "x"-line XOR extension, "p edge" graphs and
//! alist parity-check matrices.
//!
//! Generator metadata travels in a `c algodyn ...` comment so that
//! `parse(write(I)) == I` for generated instances. Files without it parse
//! with unspecified ensemble tags.

use std::fmt::Write as _;

use algodyn_core::instances::{
    Graph, GraphTag, KSatInstance, KSatKind, LdpcCode, Lit, XorEquation, XorMode, XorSatInstance, XorTag,
};

use crate::Error;

type Result<T> = std::result::Result<T, Error>;

fn bad(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Invalid(format!("line {line}: {msg}"))
}

/// Non-empty, non-comment lines with 1-based line numbers; `c algodyn`
/// comments are returned separately as key/value pairs.
struct Lines<'a> {
    body: Vec<(usize, &'a str)>,
    meta: Vec<(&'a str, &'a str)>,
}

fn split_lines(text: &str) -> Lines<'_> {
    let mut body = Vec::new();
    let mut meta = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                if let Some(kv) = rest.trim().strip_prefix("algodyn ") {
                    meta.extend(kv.split_whitespace().filter_map(|w| w.split_once('=')));
                }
                continue;
            }
        }
        body.push((i + 1, line));
    }
    Lines { body, meta }
}

fn meta<'a>(m: &[(&'a str, &'a str)], key: &str) -> Option<&'a str> {
    m.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

fn meta_num<T: std::str::FromStr>(m: &[(&str, &str)], key: &str) -> Result<Option<T>> {
    meta(m, key)
        .map(|v| v.parse::<T>().map_err(|_| Error::Invalid(format!("metadata {key}={v} is not a number"))))
        .transpose()
}

fn header<'a>(lines: &'a Lines<'a>, kind: &str) -> Result<(usize, usize, &'a [(usize, &'a str)])> {
    let (&(ln, first), rest) = lines.body.split_first().ok_or_else(|| Error::Invalid("empty file".into()))?;
    let f: Vec<&str> = first.split_whitespace().collect();
    if f.len() != 4 || f[0] != "p" || f[1] != kind {
        return Err(bad(ln, format!("expected header \"p {kind} N M\"")));
    }
    let n = f[2].parse().map_err(|_| bad(ln, "bad variable count"))?;
    let m = f[3].parse().map_err(|_| bad(ln, "bad constraint count"))?;
    Ok((n, m, rest))
}

fn literals(ln: usize, text: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    let mut closed = false;
    for tok in text.split_whitespace() {
        if closed {
            return Err(bad(ln, "literals after terminating 0"));
        }
        let x: i64 = tok.parse().map_err(|_| bad(ln, format!("bad literal {tok:?}")))?;
        if x == 0 {
            closed = true;
        } else {
            out.push(x);
        }
    }
    if !closed {
        return Err(bad(ln, "clause not terminated by 0"));
    }
    Ok(out)
}

fn lit(ln: usize, n: usize, x: i64) -> Result<Lit> {
    match Lit::from_dimacs(x) {
        Some(l) if l.var() < n => Ok(l),
        _ => Err(bad(ln, format!("literal {x} out of range for {n} variables"))),
    }
}

pub fn write_dimacs(inst: &KSatInstance) -> String {
    let mut s = String::new();
    let tag = inst.tag();
    let seed = tag.seed.map(|v| format!(" seed={v}")).unwrap_or_default();
    match tag.kind {
        KSatKind::Uniform { k } => writeln!(s, "c algodyn ensemble=ksat k={k}{seed}").unwrap(),
        KSatKind::Mixed { p_nominal } => writeln!(s, "c algodyn ensemble=2+p p={p_nominal}{seed}").unwrap(),
        KSatKind::Unspecified if tag.seed.is_some() => writeln!(s, "c algodyn{seed}").unwrap(),
        KSatKind::Unspecified => {}
    }
    writeln!(s, "p cnf {} {}", inst.n_vars(), inst.n_clauses()).unwrap();
    for c in inst.clauses() {
        for l in c {
            write!(s, "{} ", l.to_dimacs()).unwrap();
        }
        s.push_str("0\n");
    }
    s
}

pub fn parse_dimacs(text: &str) -> Result<KSatInstance> {
    let lines = split_lines(text);
    let (n, m, rest) = header(&lines, "cnf")?;
    let mut clauses = Vec::with_capacity(m);
    for &(ln, line) in rest {
        if line.starts_with('x') {
            return Err(bad(ln, "XOR line in a CNF file"));
        }
        let c = literals(ln, line)?.into_iter().map(|x| lit(ln, n, x)).collect::<Result<Vec<_>>>()?;
        clauses.push(c);
    }
    if clauses.len() != m {
        return Err(Error::Invalid(format!("header announces {m} clauses, found {}", clauses.len())));
    }
    let kind = match meta(&lines.meta, "ensemble") {
        Some("ksat") => KSatKind::Uniform {
            k: meta_num(&lines.meta, "k")?.ok_or_else(|| Error::Invalid("ensemble=ksat without k".into()))?,
        },
        Some("2+p") => KSatKind::Mixed {
            p_nominal: meta_num(&lines.meta, "p")?.ok_or_else(|| Error::Invalid("ensemble=2+p without p".into()))?,
        },
        Some(other) => return Err(Error::Invalid(format!("unknown ensemble {other}"))),
        None => KSatKind::Unspecified,
    };
    Ok(KSatInstance::new(n, clauses, kind, meta_num(&lines.meta, "seed")?)?)
}

/// XORSAT in DIMACS with "x" lines. Each equation is written as a XOR of
/// literals equal to true, negating the first variable when the right-hand
/// side is 0, so an odd number of negative literals means label 1.
pub fn write_xor(inst: &XorSatInstance) -> String {
    let mut s = String::new();
    let tag = inst.tag();
    let mode = match tag.mode {
        XorMode::FixedM => "fixed",
        XorMode::Bernoulli => "bernoulli",
    };
    let seed = tag.seed.map(|v| format!(" seed={v}")).unwrap_or_default();
    writeln!(s, "c algodyn ensemble=xorsat mode={mode} alpha={}{seed}", tag.alpha).unwrap();
    writeln!(s, "p cnf {} {}", inst.n_vars(), inst.n_equations()).unwrap();
    for e in inst.equations() {
        let [a, b, c] = e.vars.map(|v| v as i64 + 1);
        let a = if e.rhs { a } else { -a };
        writeln!(s, "x {a} {b} {c} 0").unwrap();
    }
    s
}

pub fn parse_xor(text: &str) -> Result<XorSatInstance> {
    let lines = split_lines(text);
    let (n, m, rest) = header(&lines, "cnf")?;
    let mut eqs = Vec::with_capacity(m);
    for &(ln, line) in rest {
        let body = line.strip_prefix('x').ok_or_else(|| bad(ln, "expected an \"x\" line"))?;
        let xs = literals(ln, body)?;
        if xs.len() != 3 {
            return Err(bad(ln, "XOR equations must have 3 literals"));
        }
        let ls = xs.iter().map(|&x| lit(ln, n, x)).collect::<Result<Vec<_>>>()?;
        let negatives = ls.iter().filter(|l| l.is_negated()).count();
        let vars = [ls[0].var() as u32, ls[1].var() as u32, ls[2].var() as u32];
        eqs.push(XorEquation::new(vars, negatives % 2 == 0));
    }
    if eqs.len() != m {
        return Err(Error::Invalid(format!("header announces {m} equations, found {}", eqs.len())));
    }
    let mode = match meta(&lines.meta, "mode") {
        Some("bernoulli") => XorMode::Bernoulli,
        Some("fixed") | None => XorMode::FixedM,
        Some(other) => return Err(Error::Invalid(format!("unknown XOR mode {other}"))),
    };
    let alpha = meta_num(&lines.meta, "alpha")?.unwrap_or(if n == 0 { 0.0 } else { m as f64 / n as f64 });
    Ok(XorSatInstance::new(n, eqs, XorTag { mode, alpha, seed: meta_num(&lines.meta, "seed")? })?)
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = String::new();
    let tag = g.tag();
    let seed = tag.seed.map(|v| format!(" seed={v}")).unwrap_or_default();
    writeln!(s, "c algodyn ensemble=gnp c={}{seed}", tag.c).unwrap();
    writeln!(s, "p edge {} {}", g.n_verts(), g.n_edges()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(s, "e {} {}", u + 1, v + 1).unwrap();
    }
    s
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let lines = split_lines(text);
    let (n, e, rest) = header(&lines, "edge")?;
    let mut edges = Vec::with_capacity(e);
    for &(ln, line) in rest {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 || f[0] != "e" {
            return Err(bad(ln, "expected \"e u v\""));
        }
        let end = |t: &str| -> Result<u32> {
            match t.parse::<usize>() {
                Ok(v) if (1..=n).contains(&v) => Ok(v as u32 - 1),
                _ => Err(bad(ln, format!("vertex {t} out of range 1..={n}"))),
            }
        };
        edges.push((end(f[1])?, end(f[2])?));
    }
    if edges.len() != e {
        return Err(Error::Invalid(format!("header announces {e} edges, found {}", edges.len())));
    }
    let c = meta_num(&lines.meta, "c")?.unwrap_or(if n == 0 { 0.0 } else { 2.0 * e as f64 / n as f64 });
    Ok(Graph::new(n, edges, GraphTag { c, seed: meta_num(&lines.meta, "seed")? })?)
}

/// alist: `n m`, `l k`, column weights, row weights, then for each bit its
/// checks and for each check its bits (1-based).
pub fn write_alist(code: &LdpcCode) -> String {
    let mut s = String::new();
    let (n, m) = (code.n_bits(), code.n_checks());
    let join = |xs: &[u32]| xs.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ");
    let bit_checks = code.bit_checks();
    writeln!(s, "{n} {m}").unwrap();
    writeln!(s, "{} {}", code.column_weight(), code.row_weight()).unwrap();
    writeln!(s, "{}", bit_checks.iter().map(|c| c.len().to_string()).collect::<Vec<_>>().join(" ")).unwrap();
    writeln!(s, "{}", code.checks().iter().map(|c| c.len().to_string()).collect::<Vec<_>>().join(" ")).unwrap();
    for c in &bit_checks {
        writeln!(s, "{}", join(c)).unwrap();
    }
    for c in code.checks() {
        writeln!(s, "{}", join(c)).unwrap();
    }
    s
}

pub fn parse_alist(text: &str) -> Result<LdpcCode> {
    let rows: Vec<(usize, Vec<usize>)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| bad(i + 1, format!("bad integer {t:?}"))))
                .collect::<Result<Vec<_>>>()
                .map(|v| (i + 1, v))
        })
        .collect::<Result<_>>()?;
    let get = |i: usize, len: usize| -> Result<&[usize]> {
        match rows.get(i) {
            Some((ln, v)) if v.len() == len => Ok(v),
            Some((ln, _)) => Err(bad(*ln, format!("expected {len} integers"))),
            None => Err(Error::Invalid("alist file truncated".into())),
        }
    };
    let nm = get(0, 2)?;
    let (n, m) = (nm[0], nm[1]);
    let lk = get(1, 2)?;
    let (l, k) = (lk[0], lk[1]);
    let col_w = get(2, n)?.to_vec();
    let row_w = get(3, m)?.to_vec();
    let mut bit_checks = Vec::with_capacity(n);
    for (b, &w) in col_w.iter().enumerate() {
        bit_checks.push(get(4 + b, w)?.to_vec());
    }
    let mut checks = Vec::with_capacity(m);
    for (c, &w) in row_w.iter().enumerate() {
        let row = get(4 + n + c, w)?;
        if let Some(&x) = row.iter().find(|&&x| x == 0 || x > n) {
            return Err(bad(rows[4 + n + c].0, format!("bit {x} out of range 1..={n}")));
        }
        checks.push(row.iter().map(|&x| x as u32 - 1).collect::<Vec<u32>>());
    }
    if rows.len() != 4 + n + m {
        return Err(bad(rows[(4 + n + m).min(rows.len() - 1)].0, "trailing data"));
    }
    let code = LdpcCode::new(n, checks, l, k)?;
    let consistent = code
        .bit_checks()
        .iter()
        .zip(&bit_checks)
        .all(|(a, b)| a.iter().map(|&x| x as usize + 1).eq(b.iter().copied()));
    if !consistent {
        return Err(Error::Invalid("column lists disagree with row lists".into()));
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_header() {
        let inst = parse_dimacs("c hello\np cnf 4 5\n1 -2 3 0\n-1 2 0\n4 0\n2 3 -4 0\n1 0\n").unwrap();
        assert_eq!((inst.n_vars(), inst.n_clauses()), (4, 5));
        assert_eq!(inst.tag().kind, KSatKind::Unspecified);
        assert!(parse_dimacs("p cnf 4 2\n1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 3 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 2\n").is_err());
    }

    #[test]
    fn xor_line_convention() {
        let inst = parse_xor("p cnf 3 2\nx 1 -2 3 0\nx 1 2 3 0\n").unwrap();
        assert_eq!(inst.equations()[0], XorEquation::new([0, 1, 2], false));
        assert!(inst.equations()[0].label());
        assert_eq!(inst.equations()[1], XorEquation::new([0, 1, 2], true));
    }

    #[test]
    fn graph_and_alist_errors() {
        assert!(parse_graph("p edge 3 1\ne 1 4\n").is_err());
        assert!(parse_graph("p edge 3 1\ne 1 1\n").is_err());
        assert!(parse_alist("2 1\n1 2\n1 1\n2\n1\n1\n1 2\n").is_ok());
        assert!(parse_alist("2 1\n1 2\n1 1\n2\n1\n1\n1 3\n").is_err());
    }
}
