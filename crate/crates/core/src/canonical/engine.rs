//! Backtracking over `α(x) = c ^ P(x)`: the translation `c` first, then the
//! image `e_{p_m}` of each basis vector. Level `m` fixes the values at
//! positions `[2^m, 2^{m+1})` of the relabeled string, so prefixes can be
//! compared against the best string found so far.

use crate::hypercube::{Dimension, SignedPermutation};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    /// Colors renamed by first occurrence along the string.
    Renamed,
    /// Labels compared as given.
    Raw,
}

pub struct Outcome {
    /// Least string (or the target).
    pub best: Vec<u16>,
    /// Number of `α` attaining it.
    pub count: u64,
    /// The first `α` attaining it.
    pub first: Option<SignedPermutation>,
    /// Further attaining `α`, up to the collection cap.
    pub leaves: Vec<SignedPermutation>,
    /// Color renaming `map[f-color] = string color` at `first` (Renamed mode).
    pub first_map: Vec<u16>,
}

struct Engine<'a> {
    n: usize,
    labels: &'a [u16],
    mode: Mode,
    fixed: bool,
    have_best: bool,
    best: Vec<u16>,
    cur: Vec<u16>,
    img: Vec<u32>,
    perm: Vec<u8>,
    used: u32,
    eq: Vec<bool>,
    map: Vec<u16>,
    next: u16,
    log: Vec<u16>,
    count: u64,
    first: Option<(u32, Vec<u8>)>,
    first_map: Vec<u16>,
    leaves: Vec<(u32, Vec<u8>)>,
    cap: usize,
    limit: u64,
}

impl<'a> Engine<'a> {
    #[inline]
    fn label(&mut self, y: u32) -> u16 {
        let c = self.labels[y as usize];
        match self.mode {
            Mode::Raw => c,
            Mode::Renamed => {
                let slot = self.map[c as usize];
                if slot != u16::MAX {
                    slot
                } else {
                    self.map[c as usize] = self.next;
                    self.next += 1;
                    self.log.push(c);
                    self.next - 1
                }
            }
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.log.len() > mark {
            let c = self.log.pop().unwrap();
            self.map[c as usize] = u16::MAX;
            self.next -= 1;
        }
    }

    fn done(&self) -> bool {
        self.fixed && self.count >= self.limit
    }

    fn leaf(&mut self) {
        let c = self.img[0];
        if self.have_best && self.eq[self.n] {
            self.count += 1;
            if self.leaves.len() < self.cap {
                self.leaves.push((c, self.perm.clone()));
            }
            if self.first.is_none() {
                self.first = Some((c, self.perm.clone()));
                self.first_map = self.map.clone();
            }
        } else {
            debug_assert!(!self.fixed);
            self.best.copy_from_slice(&self.cur);
            self.have_best = true;
            self.count = 1;
            self.first = Some((c, self.perm.clone()));
            self.first_map = self.map.clone();
            self.leaves.clear();
            if self.cap > 0 {
                self.leaves.push((c, self.perm.clone()));
            }
            for e in self.eq.iter_mut() {
                *e = true;
            }
        }
    }

    fn level(&mut self, m: usize) {
        if m == self.n {
            self.leaf();
            return;
        }
        let lo = 1usize << m;
        for p in 0..self.n {
            if self.used & (1 << p) != 0 || self.done() {
                continue;
            }
            let mark = self.log.len();
            let mut eq = self.eq[m];
            let mut ok = true;
            let bit = 1u32 << p;
            for x in lo..2 * lo {
                let y = self.img[x - lo] ^ bit;
                self.img[x] = y;
                let v = self.label(y);
                self.cur[x] = v;
                if eq {
                    let b = self.best[x];
                    if v > b || (self.fixed && v < b) {
                        ok = false;
                        break;
                    }
                    if v < b {
                        eq = false;
                    }
                }
            }
            if ok {
                self.eq[m + 1] = eq;
                self.used |= bit;
                self.perm[m] = p as u8;
                self.level(m + 1);
                self.used &= !bit;
            }
            self.undo(mark);
        }
    }

    fn run(&mut self) {
        for c in 0..(1u32 << self.n) {
            if self.done() {
                break;
            }
            let mark = self.log.len();
            self.img[0] = c;
            let v = self.label(c);
            self.cur[0] = v;
            let mut eq = self.have_best;
            let mut ok = true;
            if eq {
                let b = self.best[0];
                if v > b || (self.fixed && v < b) {
                    ok = false;
                } else if v < b {
                    eq = false;
                }
            }
            if ok {
                self.eq[0] = eq;
                self.level(0);
            }
            self.undo(mark);
        }
    }
}

fn engine<'a>(n: Dimension, labels: &'a [u16], k: usize, mode: Mode, cap: usize) -> Engine<'a> {
    let order = n.order();
    Engine {
        n: n.get() as usize,
        labels,
        mode,
        fixed: false,
        have_best: false,
        best: vec![0; order],
        cur: vec![0; order],
        img: vec![0; order],
        perm: vec![0; n.get() as usize],
        used: 0,
        eq: vec![false; n.get() as usize + 1],
        map: vec![u16::MAX; k],
        next: 0,
        log: Vec::new(),
        count: 0,
        first: None,
        first_map: Vec::new(),
        leaves: Vec::new(),
        cap,
        limit: u64::MAX,
    }
}

fn to_aut(n: Dimension, (c, perm): (u32, Vec<u8>)) -> SignedPermutation {
    SignedPermutation::from_affine(n, c, perm).expect("engine produces permutations")
}

/// Least relabeled string over all of `Aut(Q_n)`, with up to `cap` attaining elements.
pub fn minimize(n: Dimension, labels: &[u16], k: usize, mode: Mode, cap: usize) -> Outcome {
    let mut e = engine(n, labels, k, mode, cap);
    e.run();
    finish(n, e)
}

/// Elements `α` whose relabeled string equals `target`, stopping after `limit`.
pub fn matches(n: Dimension, labels: &[u16], k: usize, mode: Mode, target: &[u16], limit: u64) -> Outcome {
    let mut e = engine(n, labels, k, mode, limit.min(usize::MAX as u64) as usize);
    e.fixed = true;
    e.have_best = true;
    e.best.copy_from_slice(target);
    e.limit = limit;
    e.run();
    finish(n, e)
}

fn finish(n: Dimension, e: Engine) -> Outcome {
    Outcome {
        best: e.best,
        count: e.count,
        first: e.first.map(|x| to_aut(n, x)),
        leaves: e.leaves.into_iter().map(|x| to_aut(n, x)).collect(),
        first_map: e.first_map,
    }
}
