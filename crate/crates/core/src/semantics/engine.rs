//! Indexed ground formulas and the search procedures behind the oracle.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::ast::Atom;
use crate::fol::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Tri {
    F,
    U,
    T,
}

impl Tri {
    fn and(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::F, _) | (_, Tri::F) => Tri::F,
            (Tri::T, Tri::T) => Tri::T,
            _ => Tri::U,
        }
    }

    fn or(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::T, _) | (_, Tri::T) => Tri::T,
            (Tri::F, Tri::F) => Tri::F,
            _ => Tri::U,
        }
    }

    fn imp(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::F, _) | (_, Tri::T) => Tri::T,
            (Tri::T, Tri::F) => Tri::F,
            _ => Tri::U,
        }
    }

    fn from_bool(b: bool) -> Tri {
        if b {
            Tri::T
        } else {
            Tri::F
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Node {
    Bot,
    Top,
    Atom(usize),
    And(Vec<Node>),
    Or(Vec<Node>),
    Imp(Box<Node>, Box<Node>),
}

impl Node {
    pub fn eval(&self, x: &[bool]) -> bool {
        match self {
            Node::Bot => false,
            Node::Top => true,
            Node::Atom(i) => x[*i],
            Node::And(ns) => ns.iter().all(|n| n.eval(x)),
            Node::Or(ns) => ns.iter().any(|n| n.eval(x)),
            Node::Imp(a, b) => !a.eval(x) || b.eval(x),
        }
    }

    /// Satisfaction by the here-and-there pair `(h, t)`, assuming `h` is a subset of `t`.
    pub fn ht(&self, h: &[bool], t: &[bool]) -> bool {
        match self {
            Node::Bot => false,
            Node::Top => true,
            Node::Atom(i) => h[*i],
            Node::And(ns) => ns.iter().all(|n| n.ht(h, t)),
            Node::Or(ns) => ns.iter().any(|n| n.ht(h, t)),
            Node::Imp(a, b) => (!a.ht(h, t) || b.ht(h, t)) && (!a.eval(t) || b.eval(t)),
        }
    }

    /// Kleene evaluation under a partial classical valuation.
    pub fn kleene(&self, v: &[Tri]) -> Tri {
        match self {
            Node::Bot => Tri::F,
            Node::Top => Tri::T,
            Node::Atom(i) => v[*i],
            Node::And(ns) => {
                let mut acc = Tri::T;
                for n in ns {
                    acc = acc.and(n.kleene(v));
                    if acc == Tri::F {
                        break;
                    }
                }
                acc
            }
            Node::Or(ns) => {
                let mut acc = Tri::F;
                for n in ns {
                    acc = acc.or(n.kleene(v));
                    if acc == Tri::T {
                        break;
                    }
                }
                acc
            }
            Node::Imp(a, b) => a.kleene(v).imp(b.kleene(v)),
        }
    }

    /// Here-and-there satisfaction with a partial `h` and a fixed total `t`.
    pub fn ht_partial(&self, h: &[Tri], t: &[bool]) -> Tri {
        match self {
            Node::Bot => Tri::F,
            Node::Top => Tri::T,
            Node::Atom(i) => h[*i],
            Node::And(ns) => {
                let mut acc = Tri::T;
                for n in ns {
                    acc = acc.and(n.ht_partial(h, t));
                    if acc == Tri::F {
                        break;
                    }
                }
                acc
            }
            Node::Or(ns) => {
                let mut acc = Tri::F;
                for n in ns {
                    acc = acc.or(n.ht_partial(h, t));
                    if acc == Tri::T {
                        break;
                    }
                }
                acc
            }
            Node::Imp(a, b) => {
                if a.eval(t) && !b.eval(t) {
                    Tri::F
                } else {
                    a.ht_partial(h, t).imp(b.ht_partial(h, t))
                }
            }
        }
    }

    /// Abstract here-and-there value where `here` bounds the first component
    /// and `there` bounds the second.
    fn possible(&self, here: &[Tri], there: &[Tri]) -> Tri {
        match self {
            Node::Bot => Tri::F,
            Node::Top => Tri::T,
            Node::Atom(i) => here[*i],
            Node::And(ns) => ns.iter().fold(Tri::T, |acc, n| acc.and(n.possible(here, there))),
            Node::Or(ns) => ns.iter().fold(Tri::F, |acc, n| acc.or(n.possible(here, there))),
            Node::Imp(a, b) => a.possible(here, there).imp(b.possible(here, there)).and(self.kleene(there)),
        }
    }

    pub fn atoms(&self, out: &mut Vec<usize>) {
        match self {
            Node::Atom(i) => {
                if !out.contains(i) {
                    out.push(*i)
                }
            }
            Node::And(ns) | Node::Or(ns) => ns.iter().for_each(|n| n.atoms(out)),
            Node::Imp(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
            _ => {}
        }
    }
}

pub(crate) fn compile(f: &Formula, index: &HashMap<Atom, usize>) -> Node {
    if f.is_top() {
        return Node::Top;
    }
    match f {
        Formula::Bottom => Node::Bot,
        Formula::Atom(Atom::Eq(l, r)) if l.is_ground() && r.is_ground() => {
            if l == r {
                Node::Top
            } else {
                Node::Bot
            }
        }
        Formula::Atom(a) => Node::Atom(index[a]),
        Formula::And(fs) => Node::And(fs.iter().map(|g| compile(g, index)).collect()),
        Formula::Or(fs) => Node::Or(fs.iter().map(|g| compile(g, index)).collect()),
        Formula::Implies(a, b) => Node::Imp(Box::new(compile(a, index)), Box::new(compile(b, index))),
        Formula::Forall(..) | Formula::Exists(..) => panic!("quantified formula given to the ground oracle: {f}"),
    }
}

/// Head atoms and optional body of a rule-shaped conjunct.
fn rule_shape(n: &Node) -> Option<(Option<&Node>, Vec<usize>)> {
    fn head_atoms(n: &Node) -> Option<Vec<usize>> {
        match n {
            Node::Bot => Some(Vec::new()),
            Node::Atom(i) => Some(vec![*i]),
            Node::Or(ns) => ns.iter().map(|m| if let Node::Atom(i) = m { Some(*i) } else { None }).collect(),
            _ => None,
        }
    }
    match n {
        Node::Imp(b, h) => head_atoms(h).map(|hs| (Some(&**b), hs)),
        n => head_atoms(n).map(|hs| (None, hs)),
    }
}

/// Sound bounds: every answer set contains `certain` and is contained in `possible`.
pub(crate) struct Bounds {
    pub possible: Vec<bool>,
    pub certain: Vec<bool>,
    pub inconsistent: bool,
}

pub(crate) fn bounds(formulas: &[Node], n: usize) -> Bounds {
    let mut possible = vec![true; n];
    let mut certain = vec![false; n];
    let mut inconsistent = false;
    for _round in 0..(n + 2) {
        let there: Vec<Tri> = (0..n)
            .map(|i| if certain[i] { Tri::T } else if possible[i] { Tri::U } else { Tri::F })
            .collect();
        let mut p = vec![false; n];
        loop {
            let mut changed = false;
            let here: Vec<Tri> = p.iter().map(|&b| if b { Tri::U } else { Tri::F }).collect();
            for f in formulas {
                match rule_shape(f) {
                    Some((body, heads)) => {
                        if body.map_or(true, |b| b.possible(&here, &there) != Tri::F) {
                            for h in heads {
                                if !p[h] {
                                    p[h] = true;
                                    changed = true;
                                }
                            }
                        }
                    }
                    None => {
                        let mut atoms = Vec::new();
                        f.atoms(&mut atoms);
                        for a in atoms {
                            if !p[a] {
                                p[a] = true;
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut changed = false;
        for i in 0..n {
            if possible[i] && !p[i] {
                possible[i] = false;
                changed = true;
            }
        }
        loop {
            let v: Vec<Tri> = (0..n)
                .map(|i| if certain[i] { Tri::T } else if possible[i] { Tri::U } else { Tri::F })
                .collect();
            let mut grew = false;
            for f in formulas {
                if let Some((body, heads)) = rule_shape(f) {
                    if body.map_or(Tri::T, |b| b.kleene(&v)) != Tri::T {
                        continue;
                    }
                    let live: Vec<usize> = heads.into_iter().filter(|&h| possible[h]).collect();
                    match live.as_slice() {
                        [] => inconsistent = true,
                        [h] if !certain[*h] => {
                            certain[*h] = true;
                            grew = true;
                        }
                        _ => {}
                    }
                }
            }
            if !grew {
                break;
            }
            changed = true;
        }
        if (0..n).any(|i| certain[i] && !possible[i]) {
            inconsistent = true;
        }
        if !changed || inconsistent {
            break;
        }
    }
    Bounds { possible, certain, inconsistent }
}

/// Whether some `y` strictly inside `x` makes `(y, x)` satisfy every formula.
pub(crate) fn has_smaller_model(formulas: &[Node], x: &[bool], watch: &[Vec<usize>]) -> bool {
    let members: Vec<usize> = (0..x.len()).filter(|&i| x[i]).collect();
    if members.is_empty() {
        return false;
    }
    let mut h: Vec<Tri> = x.iter().map(|&b| if b { Tri::U } else { Tri::F }).collect();
    fn go(
        k: usize,
        members: &[usize],
        any_false: bool,
        h: &mut Vec<Tri>,
        formulas: &[Node],
        x: &[bool],
        watch: &[Vec<usize>],
    ) -> bool {
        if k == members.len() {
            return any_false;
        }
        let a = members[k];
        for val in [Tri::F, Tri::T] {
            if val == Tri::T && !any_false && k + 1 == members.len() {
                break;
            }
            h[a] = val;
            let ok = watch[a].iter().all(|&fi| formulas[fi].ht_partial(h, x) != Tri::F);
            if ok && go(k + 1, members, any_false || val == Tri::F, h, formulas, x, watch) {
                h[a] = Tri::U;
                return true;
            }
        }
        h[a] = Tri::U;
        false
    }
    go(0, &members, false, &mut h, formulas, x, watch)
}

pub(crate) fn watch_lists(formulas: &[Node], n: usize) -> Vec<Vec<usize>> {
    let mut watch = vec![Vec::new(); n];
    for (fi, f) in formulas.iter().enumerate() {
        let mut atoms = Vec::new();
        f.atoms(&mut atoms);
        for a in atoms {
            watch[a].push(fi);
        }
    }
    watch
}

/// Depth-first enumeration of classical models of `formulas` extending the
/// partial valuation `v` over `free`, filtered by `accept`.
pub(crate) fn enumerate_models(
    formulas: &[Node],
    watch: &[Vec<usize>],
    free: &[usize],
    v: &mut Vec<Tri>,
    accept: &mut dyn FnMut(&[bool]),
) {
    fn go(
        k: usize,
        formulas: &[Node],
        watch: &[Vec<usize>],
        free: &[usize],
        v: &mut Vec<Tri>,
        accept: &mut dyn FnMut(&[bool]),
    ) {
        if k == free.len() {
            let x: Vec<bool> = v.iter().map(|&t| t == Tri::T).collect();
            accept(&x);
            return;
        }
        let a = free[k];
        for val in [Tri::F, Tri::T] {
            v[a] = val;
            if watch[a].iter().all(|&fi| formulas[fi].kleene(v) != Tri::F) {
                go(k + 1, formulas, watch, free, v, accept);
            }
        }
        v[a] = Tri::U;
    }
    go(0, formulas, watch, free, v, accept)
}

/// Order of atom sets read as binary numbers with atom `i` at bit `i`.
pub(crate) fn mask_cmp(a: &[bool], b: &[bool]) -> Ordering {
    for i in (0..a.len().max(b.len())).rev() {
        let x = a.get(i).copied().unwrap_or(false);
        let y = b.get(i).copied().unwrap_or(false);
        if x != y {
            return if x { Ordering::Greater } else { Ordering::Less };
        }
    }
    Ordering::Equal
}

/// All here-and-there models over `n` atoms, `there` enumerated first.
pub(crate) fn ht_pairs(formulas: &[Node], n: usize) -> Vec<(Vec<bool>, Vec<bool>)> {
    let mut out = Vec::new();
    let all: Vec<usize> = (0..n).collect();
    let watch = watch_lists(formulas, n);
    let mut v = vec![Tri::U; n];
    let mut thers = Vec::new();
    enumerate_models(formulas, &watch, &all, &mut v, &mut |t| thers.push(t.to_vec()));
    for t in thers {
        let members: Vec<usize> = (0..n).filter(|&i| t[i]).collect();
        for mask in 0u64..(1u64 << members.len()) {
            let mut h = vec![false; n];
            for (k, &i) in members.iter().enumerate() {
                h[i] = mask >> k & 1 == 1;
            }
            if formulas.iter().all(|f| f.ht(&h, &t)) {
                out.push((h, t.clone()));
            }
        }
    }
    out
}

/// Some classical model over `n` atoms.
pub(crate) fn first_model(formulas: &[Node], n: usize) -> Option<Vec<bool>> {
    let all: Vec<usize> = (0..n).collect();
    let watch = watch_lists(formulas, n);
    let mut v = vec![Tri::U; n];
    let mut found = None;
    enumerate_models(formulas, &watch, &all, &mut v, &mut |t| {
        if found.is_none() {
            found = Some(t.to_vec());
        }
    });
    found
}

/// An HT pair satisfying one side only; `true` marks the left side.
pub(crate) fn ht_difference(left: &[Node], right: &[Node], n: usize) -> Option<(bool, Vec<bool>, Vec<bool>)> {
    let all: Vec<usize> = (0..n).collect();
    for (is_left, a, b) in [(true, left, right), (false, right, left)] {
        let watch = watch_lists(a, n);
        let mut v = vec![Tri::U; n];
        let mut found = None;
        enumerate_models(a, &watch, &all, &mut v, &mut |t| {
            if found.is_some() {
                return;
            }
            let members: Vec<usize> = (0..n).filter(|&i| t[i]).collect();
            let mut h = vec![false; n];
            for mask in 0u64..(1u64 << members.len()) {
                for (k, &i) in members.iter().enumerate() {
                    h[i] = mask >> k & 1 == 1;
                }
                if a.iter().all(|f| f.ht(&h, t)) && !b.iter().all(|f| f.ht(&h, t)) {
                    found = Some((is_left, h.clone(), t.to_vec()));
                    return;
                }
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

pub(crate) fn tri(b: bool) -> Tri {
    Tri::from_bool(b)
}
