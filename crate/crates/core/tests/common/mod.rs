#![allow(dead_code)]

use equicube::canonical::{canonical_coloring, canonical_form};
use equicube::classify::{build_fiber_library, classify, ClassificationReport, ClassifyOptions, Constraint, FiberSource};
use equicube::constructions::{distance_coloring, g_ij, quasigroup_coloring, six_argument_example, star_equation_coloring, Group};
use equicube::hypercube::{parse_hex, Coloring, Dimension, Fiber, SignedPermutation};
use equicube::refinement::coarsest_equitable_refinement;
use equicube::spectral::{
    bipartite_flip, eigenvalues, essential_mask, fiber_degree, is_perfect, merge_colors, quotient_matrix, walsh,
    QuotientMatrix,
};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

pub type Check = Result<String, String>;

pub const SEED: u64 = 0x5eed_c0de;

/// Two-fold codes of `Q_7` with their stabilizer orders.
pub const TWO_FOLD: [(&str, u128); 3] = [
    ("c30000c3003c3c00003c3c00c30000c3", 1536),
    ("c30000a5005a3c00003c5a00a50000c3", 128),
    ("c2100426021c91800189384064200843", 96),
];

/// Hex code, stabilizer order, cycle lengths with multiplicity, splittable.
pub type ThreeFold = (&'static str, u128, &'static [(u32, u32)], bool);

/// Three-fold codes of `Q_7`.
pub const THREE_FOLD: [ThreeFold; 9] = [
    ("e70000db00bd7e00007ebd00db0000e7", 384, &[(6, 8)], true),
    ("e610049b029d7680016eb940d9200867", 32, &[(12, 4)], true),
    ("e610049b025eb58001ad7a40d9200867", 8, &[(24, 2)], true),
    ("e424128709395ac0035a9c90e1482427", 12, &[(24, 2)], true),
    ("f00c0c3303c33cc0033cc3c0cc30300f", 480, &[(4, 12)], false),
    ("f009096906996660066699609690900f", 160, &[(4, 2), (10, 4)], false),
    ("f00c0c3303a55ac0035aa5c0cc30300f", 16, &[(4, 4), (16, 2)], false),
    ("f00c0963063699c003996c60c690300f", 16, &[(4, 2), (10, 4)], false),
    ("e428141b03659ac00359a6c0d8281427", 8, &[(10, 2), (14, 2)], false),
];

pub fn dim(n: u32) -> Dimension {
    Dimension::new(n).unwrap()
}

pub fn code(hex: &str) -> Fiber {
    parse_hex(hex, dim(7)).unwrap()
}

/// Exhaustive classification, computed once per process.
pub fn report(n: u32, c: Constraint) -> Arc<ClassificationReport> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<ClassificationReport>>>> = OnceLock::new();
    let key = format!("{n}:{c}");
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&key) {
        return r.clone();
    }
    let lib = build_fiber_library(dim(n), c, &FiberSource::Exhaustive).unwrap();
    let r = Arc::new(classify(&lib, &ClassifyOptions::default()).unwrap());
    cache.lock().unwrap().insert(key, r.clone());
    r
}

/// Perfect colorings of several sizes, plus the reports used below.
pub fn fixtures() -> Vec<Coloring> {
    let mut out: Vec<Coloring> = TWO_FOLD.iter().map(|(h, _)| Coloring::from_fiber(&code(h))).collect();
    out.push(Coloring::from_fiber(&code(THREE_FOLD[8].0)));
    out.push(distance_coloring(dim(3)).unwrap().coloring);
    out.push(six_argument_example().coloring);
    out.push(g_ij(dim(6), 4, 5).unwrap().coloring);
    out.push(star_equation_coloring(Group::Cyclic).coloring);
    out.push(quasigroup_coloring().coloring);
    out.push(Coloring::parity(dim(5)));
    out
}

pub fn random_aut(n: Dimension, rng: &mut StdRng) -> SignedPermutation {
    let mut perm: Vec<u8> = (0..n.get() as u8).collect();
    perm.shuffle(rng);
    let flips = rng.gen::<u32>() & n.full_mask();
    SignedPermutation::new(n, perm, flips).unwrap()
}

pub fn pull_back(f: &Coloring, a: &SignedPermutation) -> Coloring {
    Coloring::new(f.n(), (0..f.n().order() as u32).map(|v| f.color(a.apply(v))).collect()).unwrap()
}

pub fn random_coloring(n: Dimension, k: u16, rng: &mut StdRng) -> Coloring {
    Coloring::from_labels(n, &(0..n.order()).map(|_| rng.gen_range(0..k)).collect::<Vec<_>>()).unwrap()
}

/// `f ∘ α` has the same quotient matrix as `f`; a non-perfect coloring stays
/// non-perfect.
pub fn equivariance(trials: usize) -> Check {
    let mut rng = StdRng::seed_from_u64(SEED);
    let fx = fixtures();
    for f in &fx {
        let q = quotient_matrix(f).map_err(|e| e.to_string())?;
        for _ in 0..trials {
            let a = random_aut(f.n(), &mut rng);
            if quotient_matrix(&pull_back(f, &a)).ok().as_ref() != Some(&q) {
                return Err(format!("matrix changed under {a:?}"));
            }
        }
    }
    let bad = Coloring::from_fn(dim(6), |v| (v % 3 == 0) as u8);
    for _ in 0..trials {
        if is_perfect(&pull_back(&bad, &random_aut(bad.n(), &mut rng))) {
            return Err("non-perfect coloring became perfect".into());
        }
    }
    Ok(format!("{} fixtures x {trials} automorphisms", fx.len()))
}

/// Parseval identity and transform inversion on random fibers.
pub fn parseval(trials: usize) -> Check {
    let mut rng = StdRng::seed_from_u64(SEED + 1);
    for i in 0..trials {
        let n = dim(1 + (i as u32 % 8));
        let t = Fiber::from_fn(n, |_| rng.gen());
        let w = walsh(&t);
        if w.parseval_sum() != (n.order() as i64) * t.count_ones() as i64 {
            return Err(format!("Parseval fails on Q_{n}"));
        }
        let back: Vec<i64> = (0..n.order() as u32).map(|v| t.get(v) as i64).collect();
        if w.inverse() != Some(back) {
            return Err(format!("inverse fails on Q_{n}"));
        }
    }
    Ok(format!("{trials} fibers"))
}

/// Refinement is idempotent, refines its input, and never gains essential
/// arguments.
pub fn refinement_laws(trials: usize) -> Check {
    let mut rng = StdRng::seed_from_u64(SEED + 2);
    for i in 0..trials {
        let n = dim(2 + (i as u32 % 6));
        let mut h = random_coloring(n, 2 + (i % 3) as u16, &mut rng);
        // keep some coordinates inessential
        for j in 0..n.get() {
            if rng.gen_bool(0.4) {
                h = Coloring::from_labels(n, &(0..n.order() as u32).map(|v| h.color(v & !(1 << j))).collect::<Vec<_>>())
                    .unwrap();
            }
        }
        let f = coarsest_equitable_refinement(&h);
        if !is_perfect(&f) || coarsest_equitable_refinement(&f) != f {
            return Err("refinement not idempotent".into());
        }
        if !equicube::refinement::is_refinement_of(&f, &h).unwrap() {
            return Err("result does not refine the input".into());
        }
        if essential_mask(&f) & !essential_mask(&h) != 0 {
            return Err("refinement gained an essential argument".into());
        }
    }
    Ok(format!("{trials} colorings"))
}

fn eig_set(f: &Coloring) -> BTreeSet<i32> {
    let q = quotient_matrix(f).unwrap();
    eigenvalues(&q, f.n()).unwrap().into_iter().map(|(l, _)| l).collect()
}

/// Every perfect merge of two colors of a classified coloring keeps a subset
/// of its eigenvalues; with two eigenvalues every merge is perfect.
pub fn merge_laws(reports: &[&ClassificationReport]) -> Check {
    let mut pairs = 0;
    let mut two = 0;
    for r in reports {
        for c in r.classes.iter().filter(|c| c.k >= 3) {
            let e = eig_set(&c.coloring);
            for i in 0..c.k {
                for j in i + 1..c.k {
                    let m = merge_colors(&c.coloring, i, j).unwrap();
                    let perfect = is_perfect(&m);
                    if e.len() == 2 && !perfect {
                        return Err(format!("two-eigenvalue class with matrix {} has an imperfect merge", c.matrix));
                    }
                    if perfect {
                        pairs += 1;
                        if !eig_set(&m).is_subset(&e) {
                            return Err(format!("merge of {} gains an eigenvalue", c.matrix));
                        }
                    }
                }
            }
            two += (e.len() == 2) as usize;
        }
    }
    Ok(format!("{pairs} refinement pairs, {two} two-eigenvalue classes"))
}

/// Largest `t` with every codimension-`t` subcube holding `|t|/2^t` ones, if
/// balanced; `-1` otherwise.
fn resilience_by_subcubes(n: u32, t: u32) -> i32 {
    let ones = t.count_ones();
    if 2 * ones != 1 << n {
        return -1;
    }
    let mut best = 0;
    for m in 1..=n {
        let ok = (0u32..1 << n).filter(|s| s.count_ones() == m).all(|fixed| {
            let mut sub = fixed;
            loop {
                // vertices with coordinates in `fixed` equal to `sub`
                let count = (0u32..1 << n).filter(|v| v & fixed == sub && (t >> v) & 1 == 1).count() as u32;
                if count << m != ones {
                    return false;
                }
                if sub == 0 {
                    return true;
                }
                sub = (sub - 1) & fixed;
            }
        });
        if !ok {
            break;
        }
        best = m as i32;
    }
    best
}

/// Degree of `f` is at most `d` iff its bipartite flip is `(n-d-1)`-resilient,
/// and symmetric 2-colorings trade `(a, b; b, a)` for `(b, a; a, b)`.
pub fn degree_resilience_duality(max_n: u32) -> Check {
    let mut total = 0;
    for n in 1..=max_n {
        for t in 0u32..(1u64 << (1 << n)) as u32 {
            let f = Fiber::from_fn(dim(n), |v| (t >> v) & 1 == 1);
            let g = bipartite_flip(&f);
            let gt = (0..1u32 << n).filter(|&v| g.get(v)).fold(0u32, |x, v| x | 1 << v);
            let deg = fiber_degree(&f) as i32;
            if resilience_by_subcubes(n, gt) != n as i32 - deg - 1 {
                return Err(format!("Q_{n}, table {t:#x}: degree {deg}"));
            }
            if (1..(1u64 << (1 << n)) - 1).contains(&(t as u64)) {
                let (cf, cg) = (Coloring::from_fiber(&f), Coloring::from_fiber(&g));
                if let Ok(q) = quotient_matrix(&cf) {
                    let (a, b) = (q.get(0, 0), q.get(0, 1));
                    if q.is_symmetric() && a > 0 && b > 0 {
                        let want = QuotientMatrix::parse(&format!("{b},{a};{a},{b}")).ok();
                        if quotient_matrix(&cg).ok() != want {
                            return Err(format!("Q_{n}, table {t:#x}: flip of ({a},{b};{b},{a})"));
                        }
                    }
                }
            }
            total += 1;
        }
    }
    Ok(format!("{total} functions"))
}

/// Canonical forms separate exactly the orbits of 2-colorings of `Q_3`.
pub fn canonical_orbits_q3() -> Check {
    let n = dim(3);
    let auts = SignedPermutation::all(n);
    let mut orbit_of: HashMap<u8, usize> = HashMap::new();
    let mut orbits = 0;
    for t in 1u32..255 {
        if orbit_of.contains_key(&(t as u8)) {
            continue;
        }
        let f = Coloring::from_fn(n, |v| (t >> v) & 1);
        for a in &auts {
            let g = pull_back(&f, a);
            for flip in [0u32, 0xff] {
                let x = (0..8u32).filter(|&v| g.color(v) == 1).fold(0u32, |x, v| x | 1 << v) ^ flip;
                orbit_of.insert(x as u8, orbits);
            }
        }
        orbits += 1;
    }
    let mut canon_of: HashMap<Coloring, usize> = HashMap::new();
    for t in 1u32..255 {
        let f = Coloring::from_fn(n, |v| (t >> v) & 1);
        let cf = canonical_form(&f).map_err(|e| e.to_string())?;
        let w = &cf.witness;
        let image = Coloring::new(n, (0..8u32).map(|v| w.color_map[f.color(w.aut.apply(v)) as usize]).collect()).unwrap();
        if image != cf.canon {
            return Err(format!("witness fails for {t:#x}"));
        }
        let o = orbit_of[&(t as u8)];
        if *canon_of.entry(cf.canon.clone()).or_insert(o) != o {
            return Err(format!("two orbits share a canonical form ({t:#x})"));
        }
        if canonical_coloring(&cf.canon).unwrap() != cf.canon {
            return Err("canonical form is not a fixed point".into());
        }
    }
    if canon_of.len() != orbits {
        return Err(format!("{} canonical forms for {orbits} orbits", canon_of.len()));
    }
    Ok(format!("254 colorings, {orbits} orbits"))
}
