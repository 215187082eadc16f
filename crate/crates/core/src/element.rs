//! Tree pair diagrams `(U, σ, V)`: the elements of Thompson's group V.
//!
//! The diagram with domain tree `U`, permutation `σ` and range tree `V` maps
//! the `i`-th leaf interval of `U` onto the `(i)σ`-th leaf interval of `V` by
//! prefix substitution on infinite binary words. Permutations act on the
//! right, so `compose(g, h)` is "apply `g`, then `h`".
//!
//! Values are immutable; every operation returns a fresh pair. `reduce`
//! cancels matched caret pairs until none remain, which yields the canonical
//! representative used for equality.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::tree::BinaryTree;

/// Which Thompson group a diagram belongs to (smallest of F ⊂ T ⊂ V).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupClass {
    F,
    T,
    V,
}

impl fmt::Display for GroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupClass::F => write!(f, "F"),
            GroupClass::T => write!(f, "T"),
            GroupClass::V => write!(f, "V"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TreePair {
    domain: BinaryTree,
    perm: Permutation,
    range: BinaryTree,
}

impl TreePair {
    /// Store a diagram as given; no normalization is performed.
    pub fn new(domain: BinaryTree, perm: Permutation, range: BinaryTree) -> Result<Self> {
        let (d, r, p) = (domain.leaves(), range.leaves(), perm.degree());
        if d != p || r != p {
            return Err(Error::LeafCountMismatch {
                domain: d,
                range: r,
                perm: p,
            });
        }
        Ok(TreePair {
            domain,
            perm,
            range,
        })
    }

    pub fn identity() -> Self {
        TreePair {
            domain: BinaryTree::leaf(),
            perm: Permutation::identity(1),
            range: BinaryTree::leaf(),
        }
    }

    pub fn domain(&self) -> &BinaryTree {
        &self.domain
    }

    pub fn range(&self) -> &BinaryTree {
        &self.range
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn leaves(&self) -> usize {
        self.perm.degree()
    }

    /// Maximum depth over the two trees.
    pub fn depth(&self) -> usize {
        self.domain.depth().max(self.range.depth())
    }

    pub fn is_identity(&self) -> bool {
        let r = self.reduce();
        r.leaves() == 1
    }

    /// Structural equality of reduced forms.
    pub fn equals(&self, other: &TreePair) -> bool {
        self.reduce() == other.reduce()
    }

    pub fn inverse(&self) -> TreePair {
        TreePair {
            domain: self.range.clone(),
            perm: self.perm.inverse(),
            range: self.domain.clone(),
        }
    }

    /// Cancel removable caret pairs until none remain. A pair is removable
    /// when leaves `i`, `i+1` are siblings in the domain tree and their images
    /// are `j`, `j+1` and siblings in the range tree. The rewriting is
    /// confluent, so the fixed point is the unique reduced representative.
    pub fn reduce(&self) -> TreePair {
        let n = self.leaves();
        let (dparent, dleaf_nodes) = parents_and_leaves(&self.domain);
        let (rparent, rleaf_nodes) = parents_and_leaves(&self.range);

        // Slot lists over both leaf sequences, linked so that collapsed pairs
        // can be replaced in place. `node[s]` is the preorder index of the
        // tree node a slot currently stands for.
        const NONE: usize = usize::MAX;
        let mut dnode = dleaf_nodes;
        let mut rnode = rleaf_nodes;
        let mut dprev: Vec<usize> = (0..n).map(|i| if i == 0 { NONE } else { i - 1 }).collect();
        let mut dnext: Vec<usize> = (0..n)
            .map(|i| if i + 1 == n { NONE } else { i + 1 })
            .collect();
        let mut rprev = dprev.clone();
        let mut rnext = dnext.clone();
        let mut dalive = vec![true; n];
        let mut ralive = vec![true; n];
        // partner: domain slot -> range slot (the permutation, kept by pointer)
        let mut partner: Vec<usize> = (0..n).map(|i| self.perm.image(i)).collect();

        let mut todo: Vec<usize> = (0..n).collect();
        while let Some(s) = todo.pop() {
            if !dalive[s] {
                continue;
            }
            let t = dnext[s];
            if t == NONE {
                continue;
            }
            let dp = dparent[dnode[s]];
            if dp == NONE || dparent[dnode[t]] != dp {
                continue;
            }
            let u = partner[s];
            let v = partner[t];
            if rnext[u] != v {
                continue;
            }
            let rp = rparent[rnode[u]];
            if rp == NONE || rparent[rnode[v]] != rp {
                continue;
            }

            // collapse (s, t) -> fresh slot for the parent caret, both sides
            let s2 = dnode.len();
            dnode.push(dp);
            dprev.push(dprev[s]);
            dnext.push(dnext[t]);
            dalive.push(true);
            dalive[s] = false;
            dalive[t] = false;
            if dprev[s] != NONE {
                dnext[dprev[s]] = s2;
            }
            if dnext[t] != NONE {
                dprev[dnext[t]] = s2;
            }

            let u2 = rnode.len();
            rnode.push(rp);
            rprev.push(rprev[u]);
            rnext.push(rnext[v]);
            ralive.push(true);
            ralive[u] = false;
            ralive[v] = false;
            if rprev[u] != NONE {
                rnext[rprev[u]] = u2;
            }
            if rnext[v] != NONE {
                rprev[rnext[v]] = u2;
            }

            partner.push(u2);
            // recheck the new slot against both neighbours
            if dprev[s2] != NONE {
                todo.push(dprev[s2]);
            }
            todo.push(s2);
        }

        // Rebuild the trees: a slot that survived names a node that is now a
        // leaf; every node above survives unchanged.
        let mut head = NONE;
        for s in 0..dnode.len() {
            if dalive[s] && dprev[s] == NONE {
                head = s;
            }
        }
        let mut dom_order = Vec::new();
        let mut s = head;
        while s != NONE {
            dom_order.push(s);
            s = dnext[s];
        }
        let mut rhead = NONE;
        for u in 0..rnode.len() {
            if ralive[u] && rprev[u] == NONE {
                rhead = u;
            }
        }
        let mut ran_order = Vec::new();
        let mut u = rhead;
        while u != NONE {
            ran_order.push(u);
            u = rnext[u];
        }

        let new_domain = rebuild(&self.domain, dom_order.iter().map(|&s| dnode[s]));
        let new_range = rebuild(&self.range, ran_order.iter().map(|&u| rnode[u]));
        let mut rank = vec![0usize; rnode.len()];
        for (k, &u) in ran_order.iter().enumerate() {
            rank[u] = k;
        }
        let images: Vec<usize> = dom_order.iter().map(|&s| rank[partner[s]]).collect();
        TreePair {
            domain: new_domain,
            perm: Permutation::from_zero_based(images),
            range: new_range,
        }
    }

    /// Apply `self`, then `other`. The range tree of `self` and the domain
    /// tree of `other` are refined to their common refinement, strands cloned
    /// accordingly, and the result reduced.
    pub fn compose(&self, other: &TreePair) -> TreePair {
        let c = BinaryTree::refine(&self.range, &other.domain);
        let g_parts = c.cut_along(&self.range); // indexed by self.range leaf
        let h_parts = c.cut_along(&other.domain); // indexed by other.domain leaf
        let n_g = self.leaves();
        let n_h = other.leaves();
        let total: usize = g_parts.iter().map(|p| p.leaves()).sum();

        // New domain: under domain leaf i of g hangs the refinement block of
        // range leaf (i)σ_g. New range: under range leaf j of h hangs the
        // block of domain leaf (j)σ_h⁻¹.
        let dom_parts: Vec<BinaryTree> =
            (0..n_g).map(|i| g_parts[self.perm.image(i)].clone()).collect();
        let h_inv = other.perm.inverse();
        let ran_parts: Vec<BinaryTree> =
            (0..n_h).map(|j| h_parts[h_inv.image(j)].clone()).collect();
        let new_domain = self.domain.graft(&dom_parts);
        let new_range = other.range.graft(&ran_parts);

        // Positions of each block in the new leaf orders.
        let mut dom_start = vec![0usize; n_g]; // by g domain leaf
        {
            let mut acc = 0;
            for i in 0..n_g {
                dom_start[i] = acc;
                acc += dom_parts[i].leaves();
            }
        }
        let mut ran_start = vec![0usize; n_h]; // by h range leaf
        {
            let mut acc = 0;
            for j in 0..n_h {
                ran_start[j] = acc;
                acc += ran_parts[j].leaves();
            }
        }

        // Walk the refinement leaves once for each side.
        let gperm_inv = self.perm.inverse();
        let mut images = vec![0usize; total];
        let mut dom_pos_of_c_leaf = vec![0usize; total];
        {
            let mut c_leaf = 0usize;
            for j in 0..n_g {
                let i = gperm_inv.image(j);
                for t in 0..g_parts[j].leaves() {
                    dom_pos_of_c_leaf[c_leaf] = dom_start[i] + t;
                    c_leaf += 1;
                }
            }
        }
        {
            let mut c_leaf = 0usize;
            for k in 0..n_h {
                let j = other.perm.image(k);
                for t in 0..h_parts[k].leaves() {
                    images[dom_pos_of_c_leaf[c_leaf]] = ran_start[j] + t;
                    c_leaf += 1;
                }
            }
        }

        TreePair {
            domain: new_domain,
            perm: Permutation::from_zero_based(images),
            range: new_range,
        }
        .reduce()
    }

    /// `k`-th power by repeated squaring (negative `k` through the inverse).
    pub fn power(&self, k: i64) -> TreePair {
        if k == 0 {
            return TreePair::identity();
        }
        let mut base = if k < 0 { self.inverse() } else { self.clone() }.reduce();
        let mut e = k.unsigned_abs();
        let mut acc = TreePair::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }

    /// Image of a finite binary word under the prefix substitution. The word
    /// must reach a leaf of the domain tree.
    pub fn apply_prefix(&self, word: &[u8]) -> Result<Vec<u8>> {
        let (i, consumed) = self.domain.walk(word)?;
        let mut out = self.range.leaf_address(self.perm.image(i));
        out.extend_from_slice(&word[consumed..]);
        Ok(out)
    }

    /// Convenience wrapper over a `"0101"`-style string.
    pub fn apply_prefix_str(&self, word: &str) -> Result<String> {
        let bits = parse_bits(word)?;
        let out = self.apply_prefix(&bits)?;
        Ok(out.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect())
    }

    /// The element acting as `self` below `prefix` and trivially elsewhere
    /// (the paper's `g@p`). Preserves torsion order.
    pub fn shift(&self, prefix: &[u8]) -> TreePair {
        if prefix.is_empty() {
            return self.clone();
        }
        let n = self.leaves();
        let (dom, offset) = BinaryTree::spine(prefix, &self.domain);
        let (ran, offset2) = BinaryTree::spine(prefix, &self.range);
        debug_assert_eq!(offset, offset2);
        let outside = prefix.len();
        let mut images = Vec::with_capacity(outside + n);
        for p in 0..offset {
            images.push(p);
        }
        for i in 0..n {
            images.push(offset + self.perm.image(i));
        }
        for p in offset + n..outside + n {
            images.push(p);
        }
        TreePair {
            domain: dom,
            perm: Permutation::from_zero_based(images),
            range: ran,
        }
        .reduce()
    }

    /// F if the reduced permutation is the identity, T if it is a cyclic
    /// shift, V otherwise.
    pub fn classify(&self) -> GroupClass {
        let r = self.reduce();
        if r.perm.is_identity() {
            GroupClass::F
        } else if r.perm.is_cyclic() {
            GroupClass::T
        } else {
            GroupClass::V
        }
    }

    /// One-line text form `TREE ; PERM ; TREE`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(';').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "expected `TREE ; PERM ; TREE`, got {} part(s)",
                parts.len()
            )));
        }
        let domain = BinaryTree::parse(parts[0])?;
        let perm = parse_perm(parts[1])?;
        let range = BinaryTree::parse(parts[2])?;
        TreePair::new(domain, perm, range)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "domain_tree": tree_to_value(&self.domain),
            "perm": self.perm.one_line(),
            "range_tree": tree_to_value(&self.range),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("expected a JSON object".into()))?;
        let domain = value_to_tree(
            obj.get("domain_tree")
                .ok_or_else(|| Error::Parse("missing domain_tree".into()))?,
        )?;
        let range = value_to_tree(
            obj.get("range_tree")
                .ok_or_else(|| Error::Parse("missing range_tree".into()))?,
        )?;
        let perm_arr = obj
            .get("perm")
            .and_then(|p| p.as_array())
            .ok_or_else(|| Error::Parse("missing perm array".into()))?;
        let images: Option<Vec<usize>> =
            perm_arr.iter().map(|x| x.as_u64().map(|v| v as usize)).collect();
        let perm = Permutation::from_one_line(
            images.ok_or_else(|| Error::Parse("perm entries must be integers".into()))?,
        )?;
        TreePair::new(domain, perm, range)
    }
}

impl fmt::Display for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {} ; {}", self.domain, self.perm, self.range)
    }
}

impl fmt::Debug for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub(crate) fn parse_bits(word: &str) -> Result<Vec<u8>> {
    word.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::BadBit(other)),
        })
        .collect()
}

fn parse_perm(text: &str) -> Result<Permutation> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Parse("permutation must be bracketed, e.g. [2 1]".into()))?;
    let images: Result<Vec<usize>> = inner
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad permutation entry {s:?}")))
        })
        .collect();
    Permutation::from_one_line(images?)
}

/// parent preorder index of every node (usize::MAX at the root), plus the
/// preorder indices of the leaves in leaf order.
fn parents_and_leaves(tree: &BinaryTree) -> (Vec<usize>, Vec<usize>) {
    const NONE: usize = usize::MAX;
    let shape = tree.shape();
    let mut parent = vec![NONE; shape.len()];
    let mut leaves = Vec::with_capacity(tree.leaves());
    let mut stack: Vec<(usize, u8)> = Vec::new(); // (node, children owed)
    for (i, &s) in shape.iter().enumerate() {
        if let Some(&(p, _)) = stack.last() {
            parent[i] = p;
        }
        if s == 1 {
            stack.push((i, 2));
        } else {
            leaves.push(i);
            while let Some(top) = stack.last_mut() {
                top.1 -= 1;
                if top.1 == 0 {
                    stack.pop();
                } else {
                    break;
                }
            }
        }
    }
    (parent, leaves)
}

/// Rebuild a tree after reduction: nodes listed in `now_leaves` become leaves.
fn rebuild(tree: &BinaryTree, now_leaves: impl Iterator<Item = usize>) -> BinaryTree {
    let shape = tree.shape();
    let mut is_leaf_now = vec![false; shape.len()];
    for node in now_leaves {
        is_leaf_now[node] = true;
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < shape.len() {
        if is_leaf_now[i] {
            out.push(0);
            i = tree.subtree_end(i);
        } else {
            out.push(shape[i]);
            i += 1;
        }
    }
    BinaryTree::from_shape(out)
}

fn tree_to_value(tree: &BinaryTree) -> Value {
    // iterative: a frame per open caret
    let mut frames: Vec<Vec<Value>> = Vec::new();
    for &s in tree.shape() {
        if s == 1 {
            frames.push(Vec::with_capacity(2));
        } else {
            let mut v = Value::Null;
            loop {
                match frames.last_mut() {
                    None => return v,
                    Some(top) => {
                        top.push(v);
                        if top.len() == 2 {
                            v = Value::Array(frames.pop().unwrap());
                        } else {
                            break;
                        }
                    }
                }
            }
        }
    }
    // single-leaf tree never enters the loop above with frames
    Value::Null
}

fn value_to_tree(v: &Value) -> Result<BinaryTree> {
    let mut shape = Vec::new();
    let mut stack = vec![v];
    while let Some(v) = stack.pop() {
        match v {
            Value::Null => shape.push(0),
            Value::Array(children) if children.len() == 2 => {
                shape.push(1);
                stack.push(&children[1]);
                stack.push(&children[0]);
            }
            other => {
                return Err(Error::Parse(format!(
                    "tree nodes must be null or two-element arrays, got {other}"
                )))
            }
        }
    }
    Ok(BinaryTree::from_shape(shape))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(text: &str) -> TreePair {
        TreePair::parse(text).unwrap()
    }

    /// g_n = (R_ن, reversal, L_n); the n = 3 instance used across the tests.
    fn g3() -> TreePair {
        pair("(*(**)) ; [3 2 1] ; ((**)*)")
    }

    fn swap() -> TreePair {
        pair("(**) ; [2 1] ; (**)")
    }

    #[test]
    fn constructor_checks_leaf_counts() {
        let err = TreePair::new(
            BinaryTree::caret(),
            Permutation::identity(3),
            BinaryTree::caret(),
        );
        assert!(matches!(err, Err(Error::LeafCountMismatch { .. })));
    }

    #[test]
    fn identity_reduces_from_padded_diagrams() {
        let padded = pair("(*(**)) ; [1 2 3] ; (*(**))");
        assert_eq!(padded.reduce(), TreePair::identity());
        assert!(padded.is_identity());
    }

    #[test]
    fn orientation_matches_the_flip_action() {
        // g_3 sends 0w -> 1w, 10w -> 01w, 11w -> 00w; this pins the
        // convention "leaf i of the domain maps to leaf (i)σ of the range".
        let g = g3();
        assert_eq!(g.apply_prefix_str("000").unwrap(), "100");
        assert_eq!(g.apply_prefix_str("011").unwrap(), "111");
        assert_eq!(g.apply_prefix_str("100").unwrap(), "010");
        assert_eq!(g.apply_prefix_str("110").unwrap(), "000");
        assert_eq!(g.apply_prefix_str("11011").unwrap(), "00011");
    }

    #[test]
    fn prefix_too_short_is_an_error() {
        let g = g3();
        assert!(matches!(
            g.apply_prefix_str("1"),
            Err(Error::PrefixTooShort { .. })
        ));
    }

    #[test]
    fn unreduced_swap_reduces_to_swap() {
        // both carets of the swap cloned once: a 4-leaf diagram of a_1
        let padded = pair("((**)(**)) ; [3 4 1 2] ; ((**)(**))");
        assert_eq!(padded.reduce(), swap());
        // action agrees on all depth-6 prefixes
        for w in 0..64u32 {
            let bits: Vec<u8> = (0..6).map(|k| ((w >> k) & 1) as u8).collect();
            assert_eq!(
                padded.apply_prefix(&bits).unwrap(),
                swap().apply_prefix(&bits).unwrap()
            );
        }
    }

    #[test]
    fn reduce_is_idempotent() {
        let g = g3();
        assert_eq!(g.reduce(), g.reduce().reduce());
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        for g in [g3(), swap(), pair("((**)*) ; [1 2 3] ; (*(**))")] {
            assert!(g.compose(&g.inverse()).is_identity());
            assert!(g.inverse().compose(&g).is_identity());
        }
    }

    #[test]
    fn swap_squares_to_identity() {
        assert!(swap().compose(&swap()).is_identity());
        assert!(swap().power(2).is_identity());
    }

    #[test]
    fn right_action_law() {
        let g = g3();
        let h = pair("((**)*) ; [2 3 1] ; (*(**))");
        let gh = g.compose(&h);
        for w in 0..256u32 {
            let bits: Vec<u8> = (0..8).map(|k| ((w >> k) & 1) as u8).collect();
            let via_gh = gh.apply_prefix(&bits).unwrap();
            let via_steps = h.apply_prefix(&g.apply_prefix(&bits).unwrap()).unwrap();
            assert_eq!(via_gh, via_steps);
        }
    }

    #[test]
    fn power_zero_is_identity() {
        assert!(g3().power(0).is_identity());
        assert!(g3().power(4).is_identity());
        assert!(!g3().power(2).is_identity());
        assert!(g3().power(-4).is_identity());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(TreePair::identity().classify(), GroupClass::F);
        assert_eq!(swap().classify(), GroupClass::T);
        assert_eq!(g3().classify(), GroupClass::V);
    }

    #[test]
    fn shift_examples() {
        // shift(id, "01") = id
        assert!(TreePair::identity().shift(&[0, 1]).is_identity());
        // shift(a1, "0"): 00x -> 01x, 1xx fixed
        let s = swap().shift(&[0]);
        assert_eq!(s.apply_prefix_str("000").unwrap(), "010");
        assert_eq!(s.apply_prefix_str("100").unwrap(), "100");
        // prefix composition
        let a = g3().shift(&[0]).shift(&[1]);
        let b = g3().shift(&[1, 0]);
        assert!(a.equals(&b));
    }

    #[test]
    fn text_format_round_trip() {
        for text in ["* ; [1] ; *", "(**) ; [2 1] ; (**)", "(*(**)) ; [3 2 1] ; ((**)*)"] {
            let g = pair(text);
            assert_eq!(g.to_string(), text);
        }
        assert!(TreePair::parse("(**) ; [1] ; (**)").is_err());
        assert!(TreePair::parse("(**) ; [2 1]").is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = g3();
        let v = g.to_json();
        assert_eq!(TreePair::from_json(&v).unwrap(), g);
        assert_eq!(
            v["domain_tree"],
            serde_json::json!([null, [null, null]])
        );
        assert_eq!(v["perm"], serde_json::json!([3, 2, 1]));
    }
}
