//! Line-oriented instance files.
//!
//! ```text
//! LATCOV v1 <kind>
//! METRIC <n> <root>
//! <n rows of n integers>
//! TREE <vertices> <root> <edges>
//! <a> <b> <weight>                      one line per edge
//! GROUPS <count>
//! <k> <size> <v1> .. <v_size>           one line per group
//! VALUATIONS <domain> <count> <epsilon>
//! truncated <terms>
//! <weight> <size> <e>:<w> ..            one line per term
//! explicit <n>
//! <2^n rationals, indexed by subset bit mask>
//! STOCHASTIC <elements>
//! <length> <size> <point>:<p> ..        one line per element
//! END
//! ```
//!
//! Rationals are written `p/q` (or `p` for integers). Blank lines and lines
//! starting with `#` are ignored. Sections appear in the order above and
//! only when present; `<kind>` is one of `ranking`, `mlsc`, `lcst`,
//! `stochastic`, `metric`, `tree`.

use std::fmt::Write;
use std::str::FromStr;

use super::metric::Metric;
use super::tree::{GroupedTree, RawTree};
use super::valuation::{ExplicitTable, TruncatedCoverage, TruncatedTerm, Valuation, ValuationSet};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::stochastic::{StochElement, StochasticInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    Ranking,
    Mlsc,
    Lcst,
    Stochastic,
    Metric,
    Tree,
}

impl InstanceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InstanceKind::Ranking => "ranking",
            InstanceKind::Mlsc => "mlsc",
            InstanceKind::Lcst => "lcst",
            InstanceKind::Stochastic => "stochastic",
            InstanceKind::Metric => "metric",
            InstanceKind::Tree => "tree",
        }
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ranking" => InstanceKind::Ranking,
            "mlsc" => InstanceKind::Mlsc,
            "lcst" => InstanceKind::Lcst,
            "stochastic" => InstanceKind::Stochastic,
            "metric" => InstanceKind::Metric,
            "tree" => InstanceKind::Tree,
            other => {
                return Err(Error::Unknown {
                    what: "instance kind",
                    name: other.to_string(),
                })
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub kind: InstanceKind,
    pub metric: Option<Metric>,
    /// Tree edges; groups are kept in `groups`.
    pub tree: Option<RawTree>,
    pub groups: Vec<(Vec<usize>, usize)>,
    pub valuations: Option<ValuationSet>,
    pub stochastic: Option<Vec<StochElement>>,
}

impl Instance {
    pub fn new(kind: InstanceKind) -> Self {
        Instance {
            kind,
            metric: None,
            tree: None,
            groups: Vec::new(),
            valuations: None,
            stochastic: None,
        }
    }

    pub fn require_valuations(&self) -> Result<&ValuationSet> {
        self.valuations
            .as_ref()
            .ok_or_else(|| Error::invalid("instance has no VALUATIONS section"))
    }

    pub fn require_metric(&self) -> Result<&Metric> {
        self.metric
            .as_ref()
            .ok_or_else(|| Error::invalid("instance has no METRIC section"))
    }

    /// Normalized grouped tree built from the TREE and GROUPS sections.
    pub fn grouped_tree(&self) -> Result<GroupedTree> {
        let raw = self
            .tree
            .as_ref()
            .ok_or_else(|| Error::invalid("instance has no TREE section"))?;
        let mut raw = raw.clone();
        raw.groups = self.groups.clone();
        GroupedTree::normalize(&raw)
    }

    pub fn stochastic_instance(&self) -> Result<StochasticInstance> {
        let elements = self
            .stochastic
            .clone()
            .ok_or_else(|| Error::invalid("instance has no STOCHASTIC section"))?;
        StochasticInstance::new(elements, self.require_valuations()?.clone())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "LATCOV v1 {}", self.kind.as_str()).unwrap();
        if let Some(m) = &self.metric {
            writeln!(out, "METRIC {} {}", m.len(), m.root()).unwrap();
            for row in m.rows() {
                writeln!(out, "{}", join(row.iter())).unwrap();
            }
        }
        if let Some(t) = &self.tree {
            writeln!(out, "TREE {} {} {}", t.vertices, t.root, t.edges.len()).unwrap();
            for (a, b, w) in &t.edges {
                writeln!(out, "{a} {b} {w}").unwrap();
            }
        }
        if !self.groups.is_empty() {
            writeln!(out, "GROUPS {}", self.groups.len()).unwrap();
            for (members, k) in &self.groups {
                writeln!(out, "{k} {} {}", members.len(), join(members.iter())).unwrap();
            }
        }
        if let Some(vs) = &self.valuations {
            writeln!(
                out,
                "VALUATIONS {} {} {}",
                vs.domain(),
                vs.len(),
                rational::fmt(&vs.epsilon())
            )
            .unwrap();
            for f in vs.functions() {
                match f {
                    Valuation::Truncated(t) => {
                        writeln!(out, "truncated {}", t.terms.len()).unwrap();
                        for term in &t.terms {
                            let elems: Vec<String> = term
                                .elements
                                .iter()
                                .map(|(e, w)| format!("{e}:{}", rational::fmt(w)))
                                .collect();
                            writeln!(
                                out,
                                "{} {} {}",
                                rational::fmt(&term.weight),
                                elems.len(),
                                elems.join(" ")
                            )
                            .unwrap();
                        }
                    }
                    Valuation::Explicit(t) => {
                        writeln!(out, "explicit {}", t.len()).unwrap();
                        let vals: Vec<String> = t.values().iter().map(rational::fmt).collect();
                        writeln!(out, "{}", vals.join(" ")).unwrap();
                    }
                }
            }
        }
        if let Some(els) = &self.stochastic {
            writeln!(out, "STOCHASTIC {}", els.len()).unwrap();
            for el in els {
                let outs: Vec<String> = el
                    .outcomes
                    .iter()
                    .map(|(b, p)| format!("{b}:{}", rational::fmt(p)))
                    .collect();
                writeln!(out, "{} {} {}", el.length, outs.len(), outs.join(" ")).unwrap();
            }
        }
        out.push_str("END\n");
        // trailing spaces from empty lists
        out.lines().map(str::trim_end).collect::<Vec<_>>().join("\n") + "\n"
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        let header = lines.next_tokens()?;
        if header.len() != 3 || header[0] != "LATCOV" || header[1] != "v1" {
            return Err(lines.err("expected header `LATCOV v1 <kind>`"));
        }
        let kind: InstanceKind = header[2].parse()?;
        let mut inst = Instance::new(kind);
        loop {
            let toks = lines.next_tokens()?;
            match toks[0] {
                "END" => break,
                "METRIC" => {
                    let [n, root] = lines.ints::<2>(&toks[1..])?;
                    let mut rows = Vec::with_capacity(n);
                    for _ in 0..n {
                        let row = lines.next_tokens()?;
                        rows.push(row.iter().map(|t| lines.num::<u64>(t)).collect::<Result<Vec<_>>>()?);
                    }
                    inst.metric = Some(Metric::new(rows, root).map_err(|e| lines.err(e.to_string()))?);
                }
                "TREE" => {
                    let [vertices, root, m] = lines.ints::<3>(&toks[1..])?;
                    let mut edges = Vec::with_capacity(m);
                    for _ in 0..m {
                        let e = lines.next_tokens()?;
                        let [a, b, w] = lines.ints::<3>(&e)?;
                        edges.push((a, b, w as u64));
                    }
                    inst.tree = Some(RawTree {
                        vertices,
                        root,
                        edges,
                        groups: Vec::new(),
                    });
                }
                "GROUPS" => {
                    let [count] = lines.ints::<1>(&toks[1..])?;
                    for _ in 0..count {
                        let g = lines.next_tokens()?;
                        if g.len() < 2 {
                            return Err(lines.err("group line needs `<k> <size> ..`"));
                        }
                        let k = lines.num::<usize>(g[0])?;
                        let size = lines.num::<usize>(g[1])?;
                        if g.len() != size + 2 {
                            return Err(lines.err("group size mismatch"));
                        }
                        let members = g[2..].iter().map(|t| lines.num::<usize>(t)).collect::<Result<_>>()?;
                        inst.groups.push((members, k));
                    }
                }
                "VALUATIONS" => {
                    if toks.len() != 4 {
                        return Err(lines.err("expected `VALUATIONS <domain> <count> <epsilon>`"));
                    }
                    let domain = lines.num::<usize>(toks[1])?;
                    let count = lines.num::<usize>(toks[2])?;
                    let eps = lines.rat(toks[3])?;
                    let mut functions = Vec::with_capacity(count);
                    for _ in 0..count {
                        functions.push(lines.valuation()?);
                    }
                    inst.valuations = Some(
                        ValuationSet::with_epsilon(domain, functions, eps).map_err(|e| lines.err(e.to_string()))?,
                    );
                }
                "STOCHASTIC" => {
                    let [count] = lines.ints::<1>(&toks[1..])?;
                    let mut els = Vec::with_capacity(count);
                    for _ in 0..count {
                        let t = lines.next_tokens()?;
                        if t.len() < 2 {
                            return Err(lines.err("element line needs `<length> <size> ..`"));
                        }
                        let length = lines.num::<u64>(t[0])?;
                        let size = lines.num::<usize>(t[1])?;
                        if t.len() != size + 2 {
                            return Err(lines.err("outcome count mismatch"));
                        }
                        let outcomes = t[2..].iter().map(|o| lines.pair(o)).collect::<Result<_>>()?;
                        els.push(StochElement::new(outcomes, length).map_err(|e| lines.err(e.to_string()))?);
                    }
                    inst.stochastic = Some(els);
                }
                other => return Err(lines.err(format!("unknown section `{other}`"))),
            }
        }
        Ok(inst)
    }
}

fn join<T: ToString>(it: impl Iterator<Item = T>) -> String {
    it.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            line: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            msg: msg.into(),
        }
    }

    fn next_tokens(&mut self) -> Result<Vec<&'a str>> {
        for (i, l) in self.inner.by_ref() {
            self.line = i + 1;
            let l = l.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            return Ok(l.split_whitespace().collect());
        }
        Err(self.err("unexpected end of file"))
    }

    fn num<T: FromStr>(&self, t: &str) -> Result<T> {
        t.parse().map_err(|_| self.err(format!("bad number `{t}`")))
    }

    fn rat(&self, t: &str) -> Result<Rational> {
        rational::parse(t).map_err(|_| self.err(format!("bad rational `{t}`")))
    }

    fn pair(&self, t: &str) -> Result<(usize, Rational)> {
        let (a, b) = t
            .split_once(':')
            .ok_or_else(|| self.err(format!("expected `<index>:<rational>`, got `{t}`")))?;
        Ok((self.num(a)?, self.rat(b)?))
    }

    fn ints<const N: usize>(&self, toks: &[&str]) -> Result<[usize; N]> {
        if toks.len() != N {
            return Err(self.err(format!("expected {N} integers")));
        }
        let mut out = [0; N];
        for (o, t) in out.iter_mut().zip(toks) {
            *o = self.num(t)?;
        }
        Ok(out)
    }

    fn valuation(&mut self) -> Result<Valuation> {
        let head = self.next_tokens()?;
        match (head.first().copied(), head.len()) {
            (Some("truncated"), 2) => {
                let terms: usize = self.num(head[1])?;
                let mut out = Vec::with_capacity(terms);
                for _ in 0..terms {
                    let t = self.next_tokens()?;
                    if t.len() < 2 {
                        return Err(self.err("term line needs `<weight> <size> ..`"));
                    }
                    let weight = self.rat(t[0])?;
                    let size: usize = self.num(t[1])?;
                    if t.len() != size + 2 {
                        return Err(self.err("term size mismatch"));
                    }
                    let elems = t[2..].iter().map(|p| self.pair(p)).collect::<Result<_>>()?;
                    out.push(TruncatedTerm::new(weight, elems));
                }
                Ok(Valuation::Truncated(TruncatedCoverage { terms: out }))
            }
            (Some("explicit"), 2) => {
                let n: usize = self.num(head[1])?;
                let vals = self.next_tokens()?;
                let values = vals.iter().map(|v| self.rat(v)).collect::<Result<_>>()?;
                Ok(Valuation::Explicit(
                    ExplicitTable::new(n, values).map_err(|e| self.err(e.to_string()))?,
                ))
            }
            _ => Err(self.err("expected `truncated <terms>` or `explicit <n>`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    const STAR: &str = "\
LATCOV v1 lcst
# three leaves under the root
TREE 4 0 3
0 1 2
0 2 5
0 3 7
GROUPS 1
2 3 1 2 3
END
";

    #[test]
    fn parses_tree_instance() {
        let inst = Instance::parse(STAR).unwrap();
        let t = inst.grouped_tree().unwrap();
        assert_eq!(t.groups()[0].requirement, 2);
        assert_eq!(inst.to_text(), STAR.replace("# three leaves under the root\n", ""));
    }

    #[test]
    fn valuation_round_trip() {
        let f = Valuation::multi_coverage(&[vec![0, 1], vec![2]], &[2, 1]);
        let g = Valuation::Explicit(
            ExplicitTable::new(3, (0..8).map(|m: i128| rat(m.count_ones() as i128, 3)).collect()).unwrap(),
        );
        let mut inst = Instance::new(InstanceKind::Ranking);
        inst.valuations = Some(ValuationSet::new(3, vec![f, g]).unwrap());
        let text = inst.to_text();
        let back = Instance::parse(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn reports_line_numbers() {
        let err = Instance::parse("LATCOV v1 mlsc\nMETRIC 2 0\n0 1\n1 x\nEND\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
        assert!(Instance::parse("LATCOV v2 mlsc\nEND\n").is_err());
        assert!(Instance::parse("LATCOV v1 nope\nEND\n").is_err());
    }
}
