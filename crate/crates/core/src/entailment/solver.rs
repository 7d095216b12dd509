//! Backtracking search over per-atom statuses.
//!
//! Each atom's status is encoded by two bits: `q` ("P-compatible": dead or
//! permitted) and `r` ("F-compatible": dead or forbidden). Dead is `q ∧ r`,
//! permitted `q ∧ ¬r`, forbidden `¬q ∧ r`, neutral `¬q ∧ ¬r`. Every atomic
//! formula then says "all these bits are set":
//!
//! * `α = β`  : `q` and `r` over `α ⊕ β` (everything that differs is dead),
//! * `P(α)`   : `q` over `α`,
//! * `F(α)`   : `r` over `α`.
//!
//! Formulas compile to NNF trees over such cubes, and the search assigns bits
//! with unit propagation and chronological backtracking.

use crate::algebra::Denoter;
use crate::syntax::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Cube {
    pub q: u64,
    pub r: u64,
}

impl Cube {
    fn is_empty(self) -> bool {
        self.q == 0 && self.r == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Node {
    Const(bool),
    /// `positive`: all bits of the cube set; otherwise some bit clear.
    Lit {
        positive: bool,
        cube: Cube,
    },
    And(Vec<Node>),
    Or(Vec<Node>),
}

fn lit(positive: bool, cube: Cube) -> Node {
    if cube.is_empty() {
        Node::Const(positive)
    } else {
        Node::Lit { positive, cube }
    }
}

pub(crate) fn compile(f: &Formula, d: &Denoter) -> Node {
    compile_signed(f, d, true)
}

fn compile_signed(f: &Formula, d: &Denoter, positive: bool) -> Node {
    let both = |a: Node, b: Node, conj: bool| {
        if conj {
            Node::And(vec![a, b])
        } else {
            Node::Or(vec![a, b])
        }
    };
    match f {
        Formula::Top => Node::Const(positive),
        Formula::Bottom => Node::Const(!positive),
        Formula::Not(g) => compile_signed(g, d, !positive),
        Formula::Or(l, r) => both(
            compile_signed(l, d, positive),
            compile_signed(r, d, positive),
            !positive,
        ),
        Formula::And(l, r) => both(
            compile_signed(l, d, positive),
            compile_signed(r, d, positive),
            positive,
        ),
        Formula::Implies(l, r) => both(
            compile_signed(l, d, !positive),
            compile_signed(r, d, positive),
            !positive,
        ),
        Formula::Iff(l, r) => {
            let (lp, ln) = (compile_signed(l, d, true), compile_signed(l, d, false));
            let (rp, rn) = (compile_signed(r, d, true), compile_signed(r, d, false));
            if positive {
                Node::Or(vec![Node::And(vec![lp, rp]), Node::And(vec![ln, rn])])
            } else {
                Node::Or(vec![Node::And(vec![lp, rn]), Node::And(vec![ln, rp])])
            }
        }
        Formula::Eq(a, b) => {
            let diff = d.bits(a) ^ d.bits(b);
            lit(positive, Cube { q: diff, r: diff })
        }
        Formula::Perm(a) => lit(positive, Cube { q: d.bits(a), r: 0 }),
        Formula::Forb(a) => lit(positive, Cube { q: 0, r: d.bits(a) }),
    }
}

/// Partial assignment to the `q`/`r` bits of every atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub(crate) struct Assignment {
    pub q_known: u64,
    pub q_val: u64,
    pub r_known: u64,
    pub r_val: u64,
    /// Atoms that may not be dead.
    pub alive: u64,
}

struct Conflict;

impl Assignment {
    fn set(&mut self, is_q: bool, bit: u64, value: bool) -> Result<bool, Conflict> {
        let (known, val) = if is_q {
            (&mut self.q_known, &mut self.q_val)
        } else {
            (&mut self.r_known, &mut self.r_val)
        };
        if *known & bit != 0 {
            return if (*val & bit != 0) == value {
                Ok(false)
            } else {
                Err(Conflict)
            };
        }
        *known |= bit;
        if value {
            *val |= bit;
        }
        Ok(true)
    }

    fn set_mask(&mut self, is_q: bool, mask: u64) -> Result<bool, Conflict> {
        let (known, val) = if is_q {
            (self.q_known, self.q_val)
        } else {
            (self.r_known, self.r_val)
        };
        if mask & known & !val != 0 {
            return Err(Conflict);
        }
        let fresh = mask & !known;
        if is_q {
            self.q_known |= fresh;
            self.q_val |= fresh;
        } else {
            self.r_known |= fresh;
            self.r_val |= fresh;
        }
        Ok(fresh != 0)
    }

    fn q_true(&self) -> u64 {
        self.q_known & self.q_val
    }

    fn r_true(&self) -> u64 {
        self.r_known & self.r_val
    }

    fn q_false(&self) -> u64 {
        self.q_known & !self.q_val
    }

    fn r_false(&self) -> u64 {
        self.r_known & !self.r_val
    }

    /// Alive atoms with one bit set get the other bit cleared.
    fn settle_alive(&mut self) -> Result<bool, Conflict> {
        if self.q_true() & self.r_true() & self.alive != 0 {
            return Err(Conflict);
        }
        let clear_r = self.q_true() & self.alive & !self.r_known;
        let clear_q = self.r_true() & self.alive & !self.q_known;
        self.r_known |= clear_r;
        self.q_known |= clear_q;
        Ok(clear_r | clear_q != 0)
    }
}

fn simplify(node: &Node, a: &Assignment) -> Node {
    match node {
        Node::Const(_) => node.clone(),
        Node::Lit { positive, cube } => {
            let falsified = cube.q & a.q_false() != 0
                || cube.r & a.r_false() != 0
                || cube.q & cube.r & a.alive != 0;
            if falsified {
                return Node::Const(!positive);
            }
            let rest = Cube {
                q: cube.q & !a.q_true(),
                r: cube.r & !a.r_true(),
            };
            lit(*positive, rest)
        }
        Node::And(children) => {
            let mut out = Vec::with_capacity(children.len());
            for c in children {
                match simplify(c, a) {
                    Node::Const(true) => {}
                    Node::Const(false) => return Node::Const(false),
                    Node::And(inner) => out.extend(inner),
                    other => out.push(other),
                }
            }
            match out.len() {
                0 => Node::Const(true),
                1 => out.pop().unwrap(),
                _ => Node::And(out),
            }
        }
        Node::Or(children) => {
            let mut out = Vec::with_capacity(children.len());
            for c in children {
                match simplify(c, a) {
                    Node::Const(false) => {}
                    Node::Const(true) => return Node::Const(true),
                    Node::Or(inner) => out.extend(inner),
                    other => out.push(other),
                }
            }
            match out.len() {
                0 => Node::Const(false),
                1 => out.pop().unwrap(),
                _ => Node::Or(out),
            }
        }
    }
}

fn lowest(mask: u64) -> u64 {
    mask & mask.wrapping_neg()
}

/// Picks `(is_q, bit, first_value)` from the first literal inside `node`.
fn pick(node: &Node) -> Option<(bool, u64, bool)> {
    match node {
        Node::Const(_) => None,
        Node::Lit { positive, cube } => {
            if cube.q != 0 {
                Some((true, lowest(cube.q), *positive))
            } else {
                Some((false, lowest(cube.r), *positive))
            }
        }
        Node::And(cs) | Node::Or(cs) => cs.iter().find_map(pick),
    }
}

/// Searches for an assignment extending `start` that satisfies every node.
pub(crate) fn solve(nodes: &[Node], start: Assignment) -> Option<Assignment> {
    let mut a = start;
    let mut current: Vec<Node> = nodes.to_vec();
    loop {
        if a.settle_alive().is_err() {
            return None;
        }
        let mut list = Vec::with_capacity(current.len());
        for n in &current {
            match simplify(n, &a) {
                Node::Const(true) => {}
                Node::Const(false) => return None,
                Node::And(inner) => list.extend(inner),
                other => list.push(other),
            }
        }
        let mut changed = false;
        for n in &list {
            if let Node::Lit { positive, cube } = n {
                let step = if *positive {
                    a.set_mask(true, cube.q)
                        .and_then(|c1| a.set_mask(false, cube.r).map(|c2| c1 | c2))
                } else if cube.q.count_ones() + cube.r.count_ones() == 1 {
                    if cube.q != 0 {
                        a.set(true, cube.q, false)
                    } else {
                        a.set(false, cube.r, false)
                    }
                } else {
                    Ok(false)
                };
                match step {
                    Ok(c) => changed |= c,
                    Err(Conflict) => return None,
                }
            }
        }
        current = list;
        if !changed {
            break;
        }
    }
    if current.is_empty() {
        return Some(a);
    }
    // Prefer the shortest clause; otherwise descend into the first disjunction.
    let clause = current
        .iter()
        .filter_map(|n| match n {
            Node::Lit {
                positive: false,
                cube,
            } => Some(*cube),
            _ => None,
        })
        .min_by_key(|c| c.q.count_ones() + c.r.count_ones());
    let (is_q, bit, first) = match clause {
        Some(c) if c.q != 0 => (true, lowest(c.q), false),
        Some(c) => (false, lowest(c.r), false),
        None => pick(&current[0])?,
    };
    for value in [first, !first] {
        let mut next = a;
        if next.set(is_q, bit, value).is_err() {
            continue;
        }
        if let Some(found) = solve(&current, next) {
            return Some(found);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Vocabulary};

    fn compile_all(src: &[&str], v: &Vocabulary) -> Vec<Node> {
        let d = Denoter::new(v).unwrap();
        src.iter()
            .map(|s| compile(&parse_formula(s, v).unwrap(), &d))
            .collect()
    }

    #[test]
    fn simple_satisfiability() {
        let v = Vocabulary::new(["a", "b"]).unwrap();
        assert!(solve(&compile_all(&["P(a)", "F(b)"], &v), Assignment::default()).is_some());
        assert!(solve(&compile_all(&["P(a)", "~P(a)"], &v), Assignment::default()).is_none());
        assert!(solve(&compile_all(&["0 = 1"], &v), Assignment::default()).is_some());
        let alive = Assignment {
            alive: 0b1111,
            ..Default::default()
        };
        assert!(solve(&compile_all(&["0 = 1"], &v), alive).is_none());
        assert!(solve(&compile_all(&["P(a)", "F(a)", "~(a = 0)"], &v), alive).is_none());
    }

    #[test]
    fn disjunction_needs_branching() {
        let v = Vocabulary::new(["a", "b"]).unwrap();
        let nodes = compile_all(&["P(a) \\/ F(a)", "~P(a)", "~(a = 0)"], &v);
        let found = solve(&nodes, Assignment::default()).unwrap();
        // every atom under a is F-compatible, one of them is not P-compatible
        assert_eq!(found.r_true() & 0b1010, 0b1010);
        assert_ne!(found.q_false() & 0b1010, 0);
    }
}
