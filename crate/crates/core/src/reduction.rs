//! The 3-SAT to edge-temporalisation reduction.
//!
//! A 3-CNF formula with `n` variables and `m` clauses becomes a strongly
//! connected digraph built from three kinds of gadgets:
//!
//! * a 4-cycle `t_i^1 -> f_i^2 -> f_i^1 -> t_i^2 -> t_i^1` per variable;
//! * per clause, an entry `c_j^1` and exit `c_j^2`, wired through the
//!   gadgets of its literals, to every other clause's exit, and to `K`
//!   pendant sources `d_j^l` and `K` pendant sinks `e_j^l`;
//! * a block `u1 -> u2 -> {d} ... {e} -> u3 -> u4 -> {b_1..b_M} -> u1`.
//!
//! The formula is satisfiable iff some schedule reaches total `L`; the
//! unsatisfiable side rests on the upper bounds `U1` and `U2`, which only
//! fall below `L` at the official parameters `K >= 91nm`, `M > (|H|+5)^2`.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{evaluate_schedule, EvalError};
use crate::graph::{Digraph, EdgeId, NodeId, Schedule};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
    #[error("missing 'p cnf' header")]
    MissingHeader,
    #[error("header announces {expected} clauses but {found} were given")]
    ClauseCount { expected: usize, found: usize },
    #[error("clause {clause} has {size} literals, expected exactly 3")]
    ClauseSize { clause: usize, size: usize },
    #[error("clause {clause} repeats variable x{var}")]
    RepeatedVariable { clause: usize, var: usize },
    #[error("variable x{var} never occurs {}", if *.positive { "positively" } else { "negatively" })]
    MissingPolarity { var: usize, positive: bool },
    #[error("literal refers to x{var} but the formula has {variables} variables")]
    VariableOutOfRange { var: usize, variables: usize },
    #[error("assignment has {found} values for {expected} variables")]
    AssignmentLength { expected: usize, found: usize },
    #[error("invalid assignment character {0:?}; use T/F or 1/0")]
    AssignmentSyntax(char),
    #[error("assignment does not satisfy clause {clause}")]
    Unsatisfied { clause: usize },
    #[error("parameter {name} must be at least 1")]
    ZeroParameter { name: &'static str },
    #[error("parameters overflow 64-bit arithmetic")]
    Overflow,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    /// 0-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn from_dimacs(lit: i64) -> Self {
        Self {
            var: lit.unsigned_abs() as usize - 1,
            positive: lit > 0,
        }
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }
}

/// A 3-CNF formula in which every clause has three distinct variables and
/// every variable occurs both positively and negatively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    variables: usize,
    clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    /// Validates raw clauses given as DIMACS literals (`±(var + 1)`).
    pub fn from_dimacs_clauses(
        variables: usize,
        clauses: &[Vec<i64>],
    ) -> Result<Self, ReductionError> {
        let mut out = Vec::with_capacity(clauses.len());
        for (j, clause) in clauses.iter().enumerate() {
            if clause.len() != 3 {
                return Err(ReductionError::ClauseSize {
                    clause: j + 1,
                    size: clause.len(),
                });
            }
            let mut lits = [Literal {
                var: 0,
                positive: true,
            }; 3];
            for (slot, &raw) in lits.iter_mut().zip(clause) {
                let var = raw.unsigned_abs() as usize;
                if raw == 0 || var > variables {
                    return Err(ReductionError::VariableOutOfRange { var, variables });
                }
                *slot = Literal::from_dimacs(raw);
            }
            for a in 0..3 {
                for b in a + 1..3 {
                    if lits[a].var == lits[b].var {
                        return Err(ReductionError::RepeatedVariable {
                            clause: j + 1,
                            var: lits[a].var + 1,
                        });
                    }
                }
            }
            out.push(lits);
        }
        let mut seen = vec![[false; 2]; variables];
        for lit in out.iter().flatten() {
            seen[lit.var][lit.positive as usize] = true;
        }
        for (var, [neg, pos]) in seen.into_iter().enumerate() {
            if !pos || !neg {
                return Err(ReductionError::MissingPolarity {
                    var: var + 1,
                    positive: !pos,
                });
            }
        }
        Ok(Self {
            variables,
            clauses: out,
        })
    }

    /// Parses DIMACS CNF: `c` comment lines, a `p cnf <vars> <clauses>`
    /// header, then 0-terminated clauses that may span lines. A `%` line ends
    /// the input.
    pub fn parse_dimacs(text: &str) -> Result<Self, ReductionError> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses: Vec<Vec<i64>> = Vec::new();
        let mut current: Vec<i64> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('c') {
                continue;
            }
            if body.starts_with('%') {
                break;
            }
            if body.starts_with('p') {
                if header.is_some() {
                    return Err(dimacs(line, "duplicate header"));
                }
                let f: Vec<&str> = body.split_whitespace().collect();
                if f.len() != 4 || f[0] != "p" || f[1] != "cnf" {
                    return Err(dimacs(line, "expected 'p cnf <variables> <clauses>'"));
                }
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| dimacs(line, &format!("invalid count {s:?}")))
                };
                header = Some((parse(f[2])?, parse(f[3])?));
                continue;
            }
            let Some((variables, _)) = header else {
                return Err(ReductionError::MissingHeader);
            };
            for tok in body.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| dimacs(line, &format!("invalid literal {tok:?}")))?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else if lit.unsigned_abs() as usize > variables {
                    return Err(dimacs(
                        line,
                        &format!("literal {lit} exceeds {variables} variables"),
                    ));
                } else {
                    current.push(lit);
                }
            }
        }
        let (variables, expected) = header.ok_or(ReductionError::MissingHeader)?;
        if !current.is_empty() {
            return Err(dimacs(
                text.lines().count(),
                "last clause is not 0-terminated",
            ));
        }
        if clauses.len() != expected {
            return Err(ReductionError::ClauseCount {
                expected,
                found: clauses.len(),
            });
        }
        Self::from_dimacs_clauses(variables, &clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.variables, self.clauses.len());
        for c in &self.clauses {
            s.push_str(&format!(
                "{} {} {} 0\n",
                c[0].to_dimacs(),
                c[1].to_dimacs(),
                c[2].to_dimacs()
            ));
        }
        s
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    pub fn dimacs_clauses(&self) -> Vec<Vec<i64>> {
        self.clauses
            .iter()
            .map(|c| c.iter().map(|l| l.to_dimacs()).collect())
            .collect()
    }

    /// 1-based index of the first clause `a` falsifies.
    pub fn first_unsatisfied(&self, a: &Assignment) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| !c.iter().any(|l| a.value(l.var) == l.positive))
            .map(|j| j + 1)
    }

    /// Exhaustive search over all `2^n` assignments, lowest binary value
    /// first (`x1` is the most significant bit). `None` when `n > max_vars`
    /// or the formula is unsatisfiable.
    pub fn brute_force_assignment(&self, max_vars: usize) -> Option<Assignment> {
        let n = self.variables;
        if n > max_vars || n >= 64 {
            return None;
        }
        (0u64..1 << n)
            .map(|bits| Assignment((0..n).map(|i| bits >> (n - 1 - i) & 1 == 1).collect()))
            .find(|a| self.first_unsatisfied(a).is_none())
    }
}

fn dimacs(line: usize, msg: &str) -> ReductionError {
    ReductionError::Dimacs {
        line,
        msg: msg.to_string(),
    }
}

/// Truth value per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    /// Parses a string such as `FTT` or `011`, one character per variable.
    pub fn parse(s: &str) -> Result<Self, ReductionError> {
        s.trim()
            .chars()
            .map(|c| match c {
                'T' | 't' | '1' => Ok(true),
                'F' | 'f' | '0' => Ok(false),
                other => Err(ReductionError::AssignmentSyntax(other)),
            })
            .collect::<Result<_, _>>()
            .map(Assignment)
    }

    pub fn value(&self, var: usize) -> bool {
        self.0[var]
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.0 {
            f.write_str(if v { "T" } else { "F" })?;
        }
        Ok(())
    }
}

/// `n`, `m` come from the formula; `K` is the number of pendant `d`/`e`
/// nodes per clause and `M` the number of block nodes `b_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionParams {
    pub n: u64,
    pub m: u64,
    #[serde(rename = "K")]
    pub k: u64,
    #[serde(rename = "M")]
    pub big_m: u64,
}

impl ReductionParams {
    /// Official parameters: `K = 91nm` and `M = (|H| + 5)^2 + 1`.
    pub fn official(n: u64, m: u64) -> Result<Self, ReductionError> {
        let k = 91u64
            .checked_mul(n)
            .and_then(|x| x.checked_mul(m))
            .ok_or(ReductionError::Overflow)?;
        let h = h_size_checked(n, m, k).ok_or(ReductionError::Overflow)?;
        let big_m = h
            .checked_add(5)
            .and_then(|x| x.checked_mul(x))
            .and_then(|x| x.checked_add(1))
            .ok_or(ReductionError::Overflow)?;
        Ok(Self { n, m, k, big_m })
    }

    /// Official parameters with optional replacements for `K` and `M`. The
    /// default `M` is derived from the chosen `K`.
    pub fn with_overrides(
        n: u64,
        m: u64,
        k: Option<u64>,
        big_m: Option<u64>,
    ) -> Result<Self, ReductionError> {
        if k == Some(0) {
            return Err(ReductionError::ZeroParameter { name: "K" });
        }
        if big_m == Some(0) {
            return Err(ReductionError::ZeroParameter { name: "M" });
        }
        let official = Self::official(n, m)?;
        let k = k.unwrap_or(official.k);
        let big_m = match big_m {
            Some(v) => v,
            None => {
                let h = h_size_checked(n, m, k).ok_or(ReductionError::Overflow)?;
                h.checked_add(5)
                    .and_then(|x| x.checked_mul(x))
                    .and_then(|x| x.checked_add(1))
                    .ok_or(ReductionError::Overflow)?
            }
        };
        Ok(Self { n, m, k, big_m })
    }

    /// `|H| = 2(K + 1)m + 4n`, the number of non-block nodes.
    pub fn h_size(&self) -> BigInt {
        BigInt::from(2) * (BigInt::from(self.k) + 1) * self.m + BigInt::from(4) * self.n
    }

    pub fn is_official(&self) -> bool {
        let h = self.h_size();
        let k_ok = BigInt::from(self.k) >= BigInt::from(91) * self.n * self.m;
        let m_ok = BigInt::from(self.big_m) > (&h + 5) * (&h + 5);
        k_ok && m_ok
    }

    pub fn node_count(&self) -> BigInt {
        BigInt::from(self.big_m) + self.h_size() + 4
    }

    pub fn edge_count(&self) -> BigInt {
        let (n, m, k, big_m) = self.big();
        4 * &n + 6 * &m + &m * (&m - 1) + 4 * &k * &m + 2 * big_m + 2
    }

    fn big(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        (
            self.n.into(),
            self.m.into(),
            self.k.into(),
            self.big_m.into(),
        )
    }

    /// Reachability a satisfying assignment's schedule is guaranteed to reach.
    pub fn lower_bound(&self) -> BigInt {
        let (n, m, k, bm) = self.big();
        let h = self.h_size();
        let km = &k * &m;
        &bm * (&bm + &h + 4)
            + (4 * &bm + 2 * &h + 10)
            + &km * (&bm + &km + &m)
            + &m * (&bm + &km + &m)
            + 4 * &n * (&bm + &k)
            + &m * (&bm + &k)
            + &bm * &km
    }

    /// Bound on any schedule that fires `(u3, u4)` before `(u1, u2)`.
    pub fn upper_bound_reversed_block(&self) -> BigInt {
        let (_, _, _, bm) = self.big();
        let h = self.h_size();
        &bm * (&h + 4 + 1) + (&h + 4) * (&bm + &h + 4)
    }

    /// Bound on any schedule firing `(u1, u2)` first when the formula is
    /// unsatisfiable.
    pub fn upper_bound_unsatisfiable(&self) -> BigInt {
        let (n, m, k, bm) = self.big();
        let h = self.h_size();
        let km = &k * &m;
        &bm * (&bm + &h + 4)
            + (4 * &bm + 3 * &h + 15)
            + (&km * (&bm + &km + &m + 17) - &k * &k)
            + &m * (&bm + &km + &m + 16)
            + 4 * &n * (&bm + &km + &m + 7)
            + &m * (&bm + &k + 4)
            + &km * (&bm + 4)
    }
}

fn h_size_checked(n: u64, m: u64, k: u64) -> Option<u64> {
    k.checked_add(1)?
        .checked_mul(2)?
        .checked_mul(m)?
        .checked_add(n.checked_mul(4)?)
}

mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact evaluation of the three bounds at `params`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    #[serde(flatten)]
    pub params: ReductionParams,
    #[serde(rename = "H_size", with = "decimal")]
    pub h_size: BigInt,
    #[serde(rename = "L", with = "decimal")]
    pub l: BigInt,
    #[serde(rename = "U1", with = "decimal")]
    pub u1: BigInt,
    #[serde(rename = "U2", with = "decimal")]
    pub u2: BigInt,
    #[serde(rename = "L_minus_U1", with = "decimal")]
    pub l_minus_u1: BigInt,
    #[serde(rename = "L_minus_U2", with = "decimal")]
    pub l_minus_u2: BigInt,
    pub official: bool,
    pub l_exceeds_u1: bool,
    pub l_exceeds_u2: bool,
}

pub fn check_bounds(params: &ReductionParams) -> BoundsReport {
    let l = params.lower_bound();
    let u1 = params.upper_bound_reversed_block();
    let u2 = params.upper_bound_unsatisfiable();
    BoundsReport {
        params: *params,
        h_size: params.h_size(),
        l_minus_u1: &l - &u1,
        l_minus_u2: &l - &u2,
        l_exceeds_u1: l > u1,
        l_exceeds_u2: l > u2,
        official: params.is_official(),
        l,
        u1,
        u2,
    }
}

/// What a node is in the construction. Indices are 1-based, as printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    U(u8),
    B(usize),
    T1(usize),
    T2(usize),
    F1(usize),
    F2(usize),
    C1(usize),
    C2(usize),
    D(usize, usize),
    E(usize, usize),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Role::U(i) => write!(f, "u{i}"),
            Role::B(i) => write!(f, "b_{i}"),
            Role::T1(i) => write!(f, "t_{i}^1"),
            Role::T2(i) => write!(f, "t_{i}^2"),
            Role::F1(i) => write!(f, "f_{i}^1"),
            Role::F2(i) => write!(f, "f_{i}^2"),
            Role::C1(j) => write!(f, "c_{j}^1"),
            Role::C2(j) => write!(f, "c_{j}^2"),
            Role::D(j, l) => write!(f, "d_{j}^{l}"),
            Role::E(j, l) => write!(f, "e_{j}^{l}"),
        }
    }
}

/// Node ids: `u1..u4 = 0..4`, then `b_1..b_M`, then per variable
/// `t^1, t^2, f^1, f^2`, then per clause `c^1, c^2, d^1..d^K, e^1..e^K`.
/// Arguments are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    n: usize,
    m: usize,
    k: usize,
    big_m: usize,
}

impl Layout {
    pub fn new(params: &ReductionParams) -> Self {
        Self {
            n: params.n as usize,
            m: params.m as usize,
            k: params.k as usize,
            big_m: params.big_m as usize,
        }
    }

    pub fn node_count(&self) -> usize {
        4 + self.big_m + 4 * self.n + self.m * (2 + 2 * self.k)
    }

    pub fn u(&self, i: usize) -> NodeId {
        i
    }
    pub fn b(&self, i: usize) -> NodeId {
        4 + i
    }
    fn var_base(&self, i: usize) -> NodeId {
        4 + self.big_m + 4 * i
    }
    pub fn t1(&self, i: usize) -> NodeId {
        self.var_base(i)
    }
    pub fn t2(&self, i: usize) -> NodeId {
        self.var_base(i) + 1
    }
    pub fn f1(&self, i: usize) -> NodeId {
        self.var_base(i) + 2
    }
    pub fn f2(&self, i: usize) -> NodeId {
        self.var_base(i) + 3
    }
    fn clause_base(&self, j: usize) -> NodeId {
        4 + self.big_m + 4 * self.n + j * (2 + 2 * self.k)
    }
    pub fn c1(&self, j: usize) -> NodeId {
        self.clause_base(j)
    }
    pub fn c2(&self, j: usize) -> NodeId {
        self.clause_base(j) + 1
    }
    pub fn d(&self, j: usize, l: usize) -> NodeId {
        self.clause_base(j) + 2 + l
    }
    pub fn e(&self, j: usize, l: usize) -> NodeId {
        self.clause_base(j) + 2 + self.k + l
    }

    pub fn role(&self, v: NodeId) -> Role {
        if v < 4 {
            return Role::U(v as u8 + 1);
        }
        if v < 4 + self.big_m {
            return Role::B(v - 4 + 1);
        }
        let rest = v - 4 - self.big_m;
        if rest < 4 * self.n {
            let i = rest / 4 + 1;
            return match rest % 4 {
                0 => Role::T1(i),
                1 => Role::T2(i),
                2 => Role::F1(i),
                _ => Role::F2(i),
            };
        }
        let rest = rest - 4 * self.n;
        let stride = 2 + 2 * self.k;
        let j = rest / stride + 1;
        match rest % stride {
            0 => Role::C1(j),
            1 => Role::C2(j),
            o if o < 2 + self.k => Role::D(j, o - 1),
            o => Role::E(j, o - 1 - self.k),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub formula: CnfFormula,
    pub params: ReductionParams,
    pub layout: Layout,
    pub digraph: Digraph,
    /// Per variable: `[(t1,f2), (f2,f1), (f1,t2), (t2,t1)]`.
    pub gadget_edges: Vec<[EdgeId; 4]>,
    pub bounds: BoundsReport,
}

/// Builds the instance. Without overrides `K = 91nm` and
/// `M = (|H| + 5)^2 + 1`.
pub fn build_instance(
    f: &CnfFormula,
    k_override: Option<u64>,
    m_override: Option<u64>,
) -> Result<ReductionInstance, ReductionError> {
    let params = ReductionParams::with_overrides(
        f.variables() as u64,
        f.clauses().len() as u64,
        k_override,
        m_override,
    )?;
    build_with_params(f, params)
}

pub fn build_with_params(
    f: &CnfFormula,
    params: ReductionParams,
) -> Result<ReductionInstance, ReductionError> {
    if params.k == 0 {
        return Err(ReductionError::ZeroParameter { name: "K" });
    }
    if params.big_m == 0 {
        return Err(ReductionError::ZeroParameter { name: "M" });
    }
    let edge_count: usize = params
        .edge_count()
        .try_into()
        .map_err(|_| ReductionError::Overflow)?;
    let lay = Layout::new(&params);
    let (n, m, k, big_m) = (lay.n, lay.m, lay.k, lay.big_m);
    let mut edges = Vec::with_capacity(edge_count);
    let mut gadget_edges = Vec::with_capacity(n);

    for i in 0..n {
        let base = edges.len();
        edges.extend([
            (lay.t1(i), lay.f2(i)),
            (lay.f2(i), lay.f1(i)),
            (lay.f1(i), lay.t2(i)),
            (lay.t2(i), lay.t1(i)),
        ]);
        gadget_edges.push([base, base + 1, base + 2, base + 3]);
    }
    for (j, clause) in f.clauses().iter().enumerate() {
        for lit in clause {
            if lit.positive {
                edges.push((lay.c1(j), lay.t1(lit.var)));
                edges.push((lay.t2(lit.var), lay.c2(j)));
            } else {
                edges.push((lay.c1(j), lay.f1(lit.var)));
                edges.push((lay.f2(lit.var), lay.c2(j)));
            }
        }
    }
    for j in 0..m {
        for h in (0..m).filter(|&h| h != j) {
            edges.push((lay.c1(j), lay.c2(h)));
        }
    }
    for j in 0..m {
        for l in 0..k {
            edges.push((lay.d(j, l), lay.c1(j)));
        }
        for l in 0..k {
            edges.push((lay.c2(j), lay.e(j, l)));
        }
    }
    for i in 0..big_m {
        edges.push((lay.b(i), lay.u(0)));
    }
    edges.push((lay.u(0), lay.u(1)));
    for j in 0..m {
        for l in 0..k {
            edges.push((lay.u(1), lay.d(j, l)));
        }
    }
    for j in 0..m {
        for l in 0..k {
            edges.push((lay.e(j, l), lay.u(2)));
        }
    }
    edges.push((lay.u(2), lay.u(3)));
    for i in 0..big_m {
        edges.push((lay.u(3), lay.b(i)));
    }
    debug_assert_eq!(edges.len(), edge_count);

    let digraph = Digraph::new(lay.node_count(), edges).expect("layout ids are in range");
    Ok(ReductionInstance {
        formula: f.clone(),
        params,
        layout: lay,
        digraph,
        gadget_edges,
        bounds: check_bounds(&params),
    })
}

impl ReductionInstance {
    pub fn role(&self, v: NodeId) -> Role {
        self.layout.role(v)
    }

    /// Roles sidecar: one `id role` line per node.
    pub fn roles_text(&self) -> String {
        let mut s = String::new();
        for v in 0..self.digraph.node_count() {
            s.push_str(&format!("{v} {}\n", self.role(v)));
        }
        s
    }

    pub fn manifest(&self) -> InstanceManifest {
        InstanceManifest {
            bounds: self.bounds.clone(),
            node_count: self.digraph.node_count(),
            edge_count: self.digraph.edge_count(),
            clauses: self.formula.dimacs_clauses(),
        }
    }

    /// Which diagonal pairs of variable `i`'s gadget the schedule activates.
    pub fn activation(&self, schedule: &Schedule, var: usize) -> Activation {
        let mut pos = vec![0usize; self.digraph.edge_count()];
        for (p, &e) in schedule.order().iter().enumerate() {
            pos[e] = p;
        }
        let g = self.gadget_edges[var];
        gadget_activation([pos[g[0]], pos[g[1]], pos[g[2]], pos[g[3]]])
    }
}

/// Everything needed to describe and rebuild an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceManifest {
    #[serde(flatten)]
    pub bounds: BoundsReport,
    pub node_count: usize,
    pub edge_count: usize,
    /// Clauses as DIMACS literals.
    pub clauses: Vec<Vec<i64>>,
}

impl InstanceManifest {
    pub fn formula(&self) -> Result<CnfFormula, ReductionError> {
        CnfFormula::from_dimacs_clauses(self.bounds.params.n as usize, &self.clauses)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Activation {
    /// `t^2` reached from `t^1` inside the gadget.
    pub true_pair: bool,
    /// `f^2` reached from `f^1` inside the gadget.
    pub false_pair: bool,
}

/// `positions` are the firing times of `[(t1,f2), (f2,f1), (f1,t2), (t2,t1)]`.
/// `t1 -> t2` needs `(t1,f2) < (f2,f1) < (f1,t2)`; `f1 -> f2` needs
/// `(f1,t2) < (t2,t1) < (t1,f2)`.
pub fn gadget_activation(positions: [usize; 4]) -> Activation {
    let [tf, ff, ft, tt] = positions;
    Activation {
        true_pair: tf < ff && ff < ft,
        false_pair: ft < tt && tt < tf,
    }
}

/// The constructive schedule for a satisfying assignment, phase by phase:
/// `(b,u1)`, `(u1,u2)`, `(u2,d)`, `(d,c^1)`, every edge out of a `c^1`
/// (inter-clause edges included), each variable gadget in its activating
/// rotation, the gadget exits into `c^2`, `(c^2,e)`, `(e,u3)`, `(u3,u4)`,
/// `(u4,b)`. Within a phase edges keep index order.
pub fn schedule_from_assignment(
    inst: &ReductionInstance,
    a: &Assignment,
) -> Result<Schedule, ReductionError> {
    let f = &inst.formula;
    if a.0.len() != f.variables() {
        return Err(ReductionError::AssignmentLength {
            expected: f.variables(),
            found: a.0.len(),
        });
    }
    if let Some(clause) = f.first_unsatisfied(a) {
        return Err(ReductionError::Unsatisfied { clause });
    }

    const GADGETS: usize = 6;
    let mut phases: Vec<Vec<EdgeId>> = vec![Vec::new(); 12];
    for (e, &(tail, head)) in inst.digraph.edges().iter().enumerate() {
        use Role::*;
        let phase = match (inst.role(tail), inst.role(head)) {
            (B(_), U(1)) => 1,
            (U(1), U(2)) => 2,
            (U(2), D(..)) => 3,
            (D(..), C1(_)) => 4,
            (C1(_), _) => 5,
            (T1(_) | T2(_) | F1(_) | F2(_), C2(_)) => 7,
            (T1(_) | T2(_) | F1(_) | F2(_), _) => GADGETS,
            (C2(_), E(..)) => 8,
            (E(..), U(3)) => 9,
            (U(3), U(4)) => 10,
            (U(4), B(_)) => 11,
            (t, h) => unreachable!("no edge {t} -> {h} in the construction"),
        };
        if phase != GADGETS {
            phases[phase].push(e);
        }
    }
    for (i, g) in inst.gadget_edges.iter().enumerate() {
        let rotation = if a.value(i) {
            [g[0], g[1], g[2], g[3]]
        } else {
            [g[2], g[3], g[0], g[1]]
        };
        phases[GADGETS].extend(rotation);
    }
    let order: Vec<EdgeId> = phases.into_iter().flatten().collect();
    debug_assert_eq!(order.len(), inst.digraph.edge_count());
    Ok(Schedule::from_vec_unchecked(order))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub total: u64,
    #[serde(rename = "L", serialize_with = "decimal::serialize")]
    pub l: BigInt,
    #[serde(rename = "meets_L")]
    pub meets_l: bool,
}

/// Evaluates `s` on the instance and compares the total with `L`.
pub fn certify(inst: &ReductionInstance, s: &Schedule) -> Result<Verdict, ReductionError> {
    let total = evaluate_schedule(&inst.digraph, s)?.total();
    let l = inst.bounds.l.clone();
    Ok(Verdict {
        total,
        meets_l: BigInt::from(total) >= l,
        l,
    })
}
