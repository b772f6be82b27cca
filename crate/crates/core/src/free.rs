//! The free graded operad on a set of generators, as linear combinations of
//! planar rooted trees.
//!
//! A tree stands for its generators read in preorder (root first, children
//! left to right). Grafting `y` into leaf `i` of `x` moves `y` past the
//! generators of `x` that follow that leaf, so `graft` carries the sign
//! `(−1)^{|y| · Σ(degrees after leaf i)}`. For corollas `x` this sign is
//! trivial, and the parallel law picks up `(−1)^{|y||z|}` exactly as in the
//! graded operad axioms.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graded::is_odd;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: Arc<str>,
    pub arity: usize,
    pub degree: i64,
}

#[derive(Clone, Debug, Default)]
pub struct GenSet {
    gens: Vec<Generator>,
    index: HashMap<Arc<str>, usize>,
}

impl GenSet {
    pub fn new<S: AsRef<str>>(gens: impl IntoIterator<Item = (S, usize, i64)>) -> Result<Self> {
        let mut set = GenSet::default();
        for (name, arity, degree) in gens {
            let name = name.as_ref();
            if name.is_empty()
                || name.starts_with('_')
                || name
                    .chars()
                    .any(|c| c.is_whitespace() || c == '(' || c == ')')
            {
                return Err(Error::Invalid(format!("bad generator name '{name}'")));
            }
            let name: Arc<str> = Arc::from(name);
            if set.index.contains_key(&name) {
                return Err(Error::DuplicateBasis(name.to_string()));
            }
            set.index.insert(name.clone(), set.gens.len());
            set.gens.push(Generator {
                name,
                arity,
                degree,
            });
        }
        Ok(set)
    }

    pub fn get(&self, name: &str) -> Option<&Generator> {
        self.index.get(name).map(|&k| &self.gens[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.gens.iter()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn corolla(&self, name: &str) -> Result<PlanarTree> {
        let g = self
            .get(name)
            .ok_or_else(|| Error::UnknownBasis(name.to_string()))?;
        Ok(PlanarTree::corolla(g))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    name: Arc<str>,
    gen_degree: i64,
    arity: usize,
    degree: i64,
    children: Vec<PlanarTree>,
}

/// A planar rooted tree: a bare leaf (the identity) or a generator node
/// whose children are subtrees or leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PlanarTree {
    Leaf,
    Node(Box<Node>),
}

impl PlanarTree {
    pub fn corolla(g: &Generator) -> Self {
        PlanarTree::node(g.name.clone(), g.degree, vec![PlanarTree::Leaf; g.arity])
    }

    fn node(name: Arc<str>, gen_degree: i64, children: Vec<PlanarTree>) -> Self {
        let arity = children.iter().map(PlanarTree::arity).sum();
        let degree = gen_degree + children.iter().map(PlanarTree::degree).sum::<i64>();
        PlanarTree::Node(Box::new(Node {
            name,
            gen_degree,
            arity,
            degree,
            children,
        }))
    }

    pub fn arity(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(n) => n.arity,
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            PlanarTree::Leaf => 0,
            PlanarTree::Node(n) => n.degree,
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            PlanarTree::Leaf => 0,
            PlanarTree::Node(n) => 1 + n.children.iter().map(PlanarTree::node_count).sum::<usize>(),
        }
    }

    /// Generator names in preorder.
    pub fn generators(&self) -> Vec<&str> {
        fn walk<'a>(t: &'a PlanarTree, out: &mut Vec<&'a str>) {
            if let PlanarTree::Node(n) = t {
                out.push(&n.name);
                for c in &n.children {
                    walk(c, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Inserts `other` at leaf `i` (1-based). Returns the new tree and whether
    /// the Koszul sign is odd.
    pub fn graft(&self, i: usize, other: &PlanarTree) -> Result<(PlanarTree, bool)> {
        if i == 0 || i > self.arity() {
            return Err(Error::Invalid(format!(
                "leaf index {i} out of range 1..={}",
                self.arity()
            )));
        }
        let mut before = 0i64;
        let t = graft_rec(self, i - 1, other, &mut before);
        let after = self.degree() - before;
        Ok((t, is_odd(other.degree()) && is_odd(after)))
    }

    /// Writes the tree as an S-expression with leaves `_1, _2, …`.
    pub fn to_sexpr(&self) -> String {
        fn walk(t: &PlanarTree, leaf: &mut usize, out: &mut String) {
            match t {
                PlanarTree::Leaf => {
                    *leaf += 1;
                    out.push('_');
                    out.push_str(&leaf.to_string());
                }
                PlanarTree::Node(n) => {
                    out.push('(');
                    out.push_str(&n.name);
                    for c in &n.children {
                        out.push(' ');
                        walk(c, leaf, out);
                    }
                    out.push(')');
                }
            }
        }
        let mut out = String::new();
        walk(self, &mut 0, &mut out);
        out
    }

    pub fn parse(gens: &GenSet, s: &str) -> Result<PlanarTree> {
        let tokens = tokenize(s);
        let mut pos = 0;
        let mut leaf = 0;
        let t = parse_rec(gens, &tokens, &mut pos, &mut leaf)?;
        if pos != tokens.len() {
            return Err(Error::Parse(format!("trailing input in '{s}'")));
        }
        Ok(t)
    }
}

fn graft_rec(t: &PlanarTree, i: usize, other: &PlanarTree, before: &mut i64) -> PlanarTree {
    match t {
        PlanarTree::Leaf => other.clone(),
        PlanarTree::Node(n) => {
            *before += n.gen_degree;
            let mut offset = 0;
            let mut children = n.children.clone();
            for (k, c) in n.children.iter().enumerate() {
                let a = c.arity();
                if i < offset + a {
                    children[k] = graft_rec(c, i - offset, other, before);
                    break;
                }
                *before += c.degree();
                offset += a;
            }
            PlanarTree::node(n.name.clone(), n.gen_degree, children)
        }
    }
}

fn tokenize(s: &str) -> Vec<String> {
    s.replace('(', " ( ")
        .replace(')', " ) ")
        .split_whitespace()
        .map(str::to_string)
        .collect()
}

fn parse_rec(
    gens: &GenSet,
    tokens: &[String],
    pos: &mut usize,
    leaf: &mut usize,
) -> Result<PlanarTree> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| Error::Parse("unexpected end of tree".into()))?;
    *pos += 1;
    if let Some(k) = tok.strip_prefix('_') {
        *leaf += 1;
        if k.parse::<usize>().ok() != Some(*leaf) {
            return Err(Error::Parse(format!("expected leaf _{leaf}, found {tok}")));
        }
        return Ok(PlanarTree::Leaf);
    }
    if tok != "(" {
        return Err(Error::Parse(format!("unexpected token '{tok}'")));
    }
    let name = tokens
        .get(*pos)
        .ok_or_else(|| Error::Parse("missing generator name".into()))?;
    *pos += 1;
    let g = gens
        .get(name)
        .ok_or_else(|| Error::UnknownBasis(name.clone()))?
        .clone();
    let mut children = Vec::with_capacity(g.arity);
    while tokens.get(*pos).map(String::as_str) != Some(")") {
        children.push(parse_rec(gens, tokens, pos, leaf)?);
    }
    *pos += 1;
    if children.len() != g.arity {
        return Err(Error::Parse(format!(
            "{} takes {} inputs, got {}",
            g.name,
            g.arity,
            children.len()
        )));
    }
    Ok(PlanarTree::node(g.name, g.degree, children))
}

impl Ord for PlanarTree {
    /// Arity, then degree, then a leaf before any node, then root name, then
    /// children lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        self.arity()
            .cmp(&other.arity())
            .then_with(|| self.degree().cmp(&other.degree()))
            .then_with(|| match (self, other) {
                (PlanarTree::Leaf, PlanarTree::Leaf) => Ordering::Equal,
                (PlanarTree::Leaf, _) => Ordering::Less,
                (_, PlanarTree::Leaf) => Ordering::Greater,
                (PlanarTree::Node(a), PlanarTree::Node(b)) => a
                    .name
                    .cmp(&b.name)
                    .then_with(|| a.children.cmp(&b.children)),
            })
    }
}

impl PartialOrd for PlanarTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexpr())
    }
}

/// A linear combination of trees of one arity and one degree, kept in
/// canonical form: sorted by tree, zero coefficients dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePoly {
    field: Field,
    arity: usize,
    degree: i64,
    terms: BTreeMap<PlanarTree, Scalar>,
}

impl TreePoly {
    pub fn zero(field: Field, arity: usize, degree: i64) -> Self {
        TreePoly {
            field,
            arity,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_tree(field: Field, tree: PlanarTree) -> Self {
        let mut p = TreePoly::zero(field, tree.arity(), tree.degree());
        p.terms.insert(tree, field.one());
        p
    }

    pub fn identity(field: Field) -> Self {
        TreePoly::from_tree(field, PlanarTree::Leaf)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PlanarTree, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &PlanarTree) -> Scalar {
        self.terms
            .get(t)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, tree: PlanarTree, c: &Scalar) -> Result<()> {
        if tree.arity() != self.arity || tree.degree() != self.degree {
            return Err(Error::Shape(format!(
                "tree {tree} has arity {} and degree {}, expected {} and {}",
                tree.arity(),
                tree.degree(),
                self.arity,
                self.degree
            )));
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&tree) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&tree);
                }
            }
            None => {
                self.terms.insert(tree, c.clone());
            }
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &TreePoly, c: &Scalar) -> Result<()> {
        for (t, x) in &other.terms {
            self.add_term(t.clone(), &(x * c))?;
        }
        Ok(())
    }

    pub fn scaled(&self, c: &Scalar) -> TreePoly {
        let mut out = TreePoly::zero(self.field, self.arity, self.degree);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(t, x)| (t.clone(), x * c)).collect();
        }
        out
    }

    /// `[[coeff, sexpr], …]` in canonical order.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(t, c)| json!([c.to_json(), t.to_sexpr()]))
                .collect(),
        )
    }

    pub fn from_json(
        gens: &GenSet,
        field: Field,
        arity: usize,
        degree: i64,
        v: &Value,
    ) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("tree polynomial must be an array".into()))?;
        let mut p = TreePoly::zero(field, arity, degree);
        for item in arr {
            let pair = item
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::Parse("term must be [coeff, tree]".into()))?;
            let c = field.parse_scalar(&pair[0])?;
            let s = pair[1]
                .as_str()
                .ok_or_else(|| Error::Parse("tree must be a string".into()))?;
            p.add_term(PlanarTree::parse(gens, s)?, &c)?;
        }
        Ok(p)
    }
}

impl fmt::Display for TreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (t, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}·{t}")?;
        }
        Ok(())
    }
}

/// Bilinear extension of [`PlanarTree::graft`].
pub fn graft(x: &TreePoly, i: usize, y: &TreePoly) -> Result<TreePoly> {
    if x.field != y.field {
        return Err(Error::FieldMismatch(
            x.field.to_string(),
            y.field.to_string(),
        ));
    }
    if i == 0 || i > x.arity {
        return Err(Error::Invalid(format!(
            "leaf index {i} out of range 1..={}",
            x.arity
        )));
    }
    let mut out = TreePoly::zero(x.field, x.arity + y.arity - 1, x.degree + y.degree);
    for (s, a) in &x.terms {
        for (t, b) in &y.terms {
            let (tree, odd) = s.graft(i, t)?;
            out.add_term(tree, &(a * b).signed(odd))?;
        }
    }
    Ok(out)
}

/// A derivation of degree −1 on the free operad, determined by its values
/// on generators.
#[derive(Clone, Debug)]
pub struct Derivation {
    field: Field,
    gens: GenSet,
    on_gens: HashMap<Arc<str>, TreePoly>,
}

/// Extends `d_on_gens` to the free operad. Generators without an entry are
/// sent to zero.
pub fn extend_derivation(
    gens: &GenSet,
    field: Field,
    d_on_gens: &BTreeMap<String, TreePoly>,
) -> Result<Derivation> {
    let mut on_gens = HashMap::new();
    for (name, p) in d_on_gens {
        let g = gens
            .get(name)
            .ok_or_else(|| Error::UnknownBasis(name.clone()))?;
        if p.arity != g.arity || p.degree != g.degree - 1 {
            return Err(Error::Degree(format!(
                "d({name}) must have arity {} and degree {}, got {} and {}",
                g.arity,
                g.degree - 1,
                p.arity,
                p.degree
            )));
        }
        if p.field != field {
            return Err(Error::FieldMismatch(p.field.to_string(), field.to_string()));
        }
        on_gens.insert(g.name.clone(), p.clone());
    }
    Ok(Derivation {
        field,
        gens: gens.clone(),
        on_gens,
    })
}

impl Derivation {
    pub fn gens(&self) -> &GenSet {
        &self.gens
    }

    pub fn on_generator(&self, name: &str) -> Option<&TreePoly> {
        self.on_gens.get(name)
    }

    /// Sum over nodes in preorder of replacing the node's generator by its
    /// differential, with sign `(−1)^{degrees of the preceding generators}`
    /// times the sign of moving the node's subtrees back into preorder.
    pub fn apply_tree(&self, t: &PlanarTree) -> TreePoly {
        let mut out = TreePoly::zero(self.field, t.arity(), t.degree() - 1);
        let mut before = 0;
        self.walk(
            t,
            &mut before,
            &mut |tree, c| {
                out.add_term(tree, &c)
                    .expect("derivation preserves arity and lowers degree");
            },
            &mut |sub| sub,
        );
        out
    }

    fn walk(
        &self,
        t: &PlanarTree,
        before: &mut i64,
        emit: &mut dyn FnMut(PlanarTree, Scalar),
        wrap: &mut dyn FnMut(PlanarTree) -> PlanarTree,
    ) {
        let PlanarTree::Node(n) = t else { return };
        let own_before = *before;
        if let Some(dg) = self.on_gens.get(&n.name) {
            for (s, c) in dg.terms() {
                let (sub, odd) = substitute(s, &n.children);
                let c = c.clone().signed(odd ^ is_odd(own_before));
                emit(wrap(sub), c);
            }
        }
        *before += n.gen_degree;
        for k in 0..n.children.len() {
            let mut inner = |sub: PlanarTree| {
                let mut children = n.children.clone();
                children[k] = sub;
                wrap(PlanarTree::node(n.name.clone(), n.gen_degree, children))
            };
            self.walk(&n.children[k], before, emit, &mut inner);
        }
    }

    pub fn apply(&self, p: &TreePoly) -> TreePoly {
        let mut out = TreePoly::zero(self.field, p.arity, p.degree - 1);
        for (t, c) in p.terms() {
            out.add_scaled(&self.apply_tree(t), c)
                .expect("derivation preserves arity and lowers degree");
        }
        out
    }
}

/// Places `children[j]` at leaf `j+1` of `s`; the sign moves each child
/// leftwards past the generators of `s` that follow its leaf.
fn substitute(s: &PlanarTree, children: &[PlanarTree]) -> (PlanarTree, bool) {
    fn rec(
        s: &PlanarTree,
        children: &[PlanarTree],
        next: &mut usize,
        before: &mut i64,
        total: i64,
        odd: &mut bool,
    ) -> PlanarTree {
        match s {
            PlanarTree::Leaf => {
                let c = children[*next].clone();
                *next += 1;
                if is_odd(c.degree()) && is_odd(total - *before) {
                    *odd = !*odd;
                }
                c
            }
            PlanarTree::Node(n) => {
                *before += n.gen_degree;
                let kids = n
                    .children
                    .iter()
                    .map(|c| rec(c, children, next, before, total, odd))
                    .collect();
                PlanarTree::node(n.name.clone(), n.gen_degree, kids)
            }
        }
    }
    let mut odd = false;
    let t = rec(s, children, &mut 0, &mut 0, s.degree(), &mut odd);
    (t, odd)
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorD2 {
    pub name: String,
    pub arity: usize,
    pub degree: i64,
    pub d_terms: usize,
    pub d2_terms: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct D2Violation {
    pub generator: String,
    pub arity: usize,
    /// `[[coeff, tree], …]` of the nonzero `d(d(g))`.
    pub residual: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct D2Report {
    pub ok: bool,
    pub max_arity: usize,
    pub generators: Vec<GeneratorD2>,
    pub violations: Vec<D2Violation>,
}

/// Computes `d(d(g))` for every generator of arity at most `max_arity`.
pub fn verify_d_squared(der: &Derivation, max_arity: usize) -> D2Report {
    let gens: Vec<&Generator> = der.gens.iter().filter(|g| g.arity <= max_arity).collect();
    let results: Vec<(GeneratorD2, Option<D2Violation>)> = gens
        .par_iter()
        .map(|g| {
            let d = der
                .on_gens
                .get(&g.name)
                .cloned()
                .unwrap_or_else(|| TreePoly::zero(der.field, g.arity, g.degree - 1));
            let dd = der.apply(&d);
            let info = GeneratorD2 {
                name: g.name.to_string(),
                arity: g.arity,
                degree: g.degree,
                d_terms: d.len(),
                d2_terms: dd.len(),
            };
            let viol = (!dd.is_zero()).then(|| D2Violation {
                generator: g.name.to_string(),
                arity: g.arity,
                residual: dd.to_json(),
            });
            (info, viol)
        })
        .collect();
    let mut generators = Vec::new();
    let mut violations = Vec::new();
    for (info, v) in results {
        generators.push(info);
        violations.extend(v);
    }
    violations.sort_by_key(|v| v.arity);
    D2Report {
        ok: violations.is_empty(),
        max_arity,
        generators,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn gens() -> GenSet {
        GenSet::new([
            ("m2", 2, 0),
            ("m3", 3, 1),
            ("a", 2, 1),
            ("b", 2, 1),
            ("c", 1, 1),
        ])
        .unwrap()
    }

    fn tp(g: &GenSet, s: &str) -> TreePoly {
        TreePoly::from_tree(q(), PlanarTree::parse(g, s).unwrap())
    }

    #[test]
    fn sexpr_round_trip() {
        let g = gens();
        for s in ["(m3 _1 (m2 _2 _3) _4)", "_1", "(c (a _1 _2))"] {
            assert_eq!(PlanarTree::parse(&g, s).unwrap().to_sexpr(), s);
        }
        assert!(PlanarTree::parse(&g, "(m2 _2 _1)").is_err());
        assert!(PlanarTree::parse(&g, "(m2 _1)").is_err());
    }

    #[test]
    fn left_comb() {
        let g = gens();
        let m2 = tp(&g, "(m2 _1 _2)");
        let x = graft(&m2, 1, &m2).unwrap();
        assert_eq!(x, tp(&g, "(m2 (m2 _1 _2) _3)"));
        assert_eq!((x.arity(), x.degree()), (3, 0));
    }

    #[test]
    fn identity_is_a_unit() {
        let g = gens();
        let x = tp(&g, "(m3 _1 (a _2 _3) _4)");
        for i in 1..=4 {
            assert_eq!(graft(&x, i, &TreePoly::identity(q())).unwrap(), x);
        }
        assert_eq!(graft(&TreePoly::identity(q()), 1, &x).unwrap(), x);
    }

    #[test]
    fn parallel_grafts_of_odd_elements_anticommute() {
        let g = gens();
        let x = tp(&g, "(m2 _1 _2)");
        let y = tp(&g, "(a _1 _2)");
        let z = tp(&g, "(b _1 _2)");
        let lhs = graft(&graft(&x, 1, &y).unwrap(), 3, &z).unwrap();
        let rhs = graft(&graft(&x, 2, &z).unwrap(), 1, &y).unwrap();
        assert_eq!(lhs, rhs.scaled(&q().from_i64(-1)));
    }

    #[test]
    fn out_of_range_leaf() {
        let g = gens();
        let m2 = tp(&g, "(m2 _1 _2)");
        assert!(graft(&m2, 3, &m2).is_err());
        assert!(graft(&m2, 0, &m2).is_err());
    }

    #[test]
    fn zero_derivation() {
        let g = gens();
        let d = extend_derivation(&g, q(), &BTreeMap::new()).unwrap();
        assert!(d.apply(&tp(&g, "(m3 _1 (a _2 _3) _4)")).is_zero());
        assert!(verify_d_squared(&d, 5).ok);
    }

    #[test]
    fn corolla_gives_its_differential() {
        let g = gens();
        let dm3 = tp(&g, "(m2 (m2 _1 _2) _3)");
        let d =
            extend_derivation(&g, q(), &BTreeMap::from([("m3".to_string(), dm3.clone())])).unwrap();
        assert_eq!(d.apply(&tp(&g, "(m3 _1 _2 _3)")), dm3);
    }

    #[test]
    fn second_odd_node_gets_a_minus_sign() {
        let g = GenSet::new([("u", 1, 1), ("v", 1, 1), ("e", 1, 0)]).unwrap();
        let e = tp(&g, "(e _1)");
        let on = BTreeMap::from([("u".to_string(), e.clone()), ("v".to_string(), e)]);
        let d = extend_derivation(&g, q(), &on).unwrap();
        let got = d.apply(&tp(&g, "(u (v _1))"));
        let mut want = tp(&g, "(e (v _1))");
        want.add_scaled(&tp(&g, "(u (e _1))"), &q().from_i64(-1))
            .unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn rejects_wrong_degree() {
        let g = gens();
        let on = BTreeMap::from([("m3".to_string(), tp(&g, "(a (m2 _1 _2) _3)"))]);
        assert!(matches!(
            extend_derivation(&g, q(), &on),
            Err(Error::Degree(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let g = gens();
        let mut p = tp(&g, "(m2 (a _1 _2) _3)");
        p.add_scaled(&tp(&g, "(m2 _1 (a _2 _3))"), &q().from_i64(-3))
            .unwrap();
        let back = TreePoly::from_json(&g, q(), 3, 1, &p.to_json()).unwrap();
        assert_eq!(back, p);
    }
}
