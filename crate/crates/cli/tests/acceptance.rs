use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use pexc_core::catalog::{build, catalog_entries, named_perm_group, verify_entry, CatalogReport, Constituent, Recipe};
use pexc_core::constructions::{deleted_permutation_module, gamma_l1, verify_wreath_orbits, wreath, GammaL1Spec, WreathSpec};
use pexc_core::field::FieldSpec;
use pexc_core::jordan::{cyclic_tensor_shape, jordan_tensor, kappa, kappa_bound, TensorShape};
use pexc_core::matrix::{jordan_type_unipotent, kronecker, regular_representation};
use pexc_core::perm::{an_concealed_predicate, DEFAULT_MAX_SUBSETS};
use pexc_core::{Limits, MatGroup, Matrix, PermGroup, PexcStatus};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ENTRY_BUDGET: Duration = Duration::from_secs(30);
const DELETED_BUDGET: Duration = Duration::from_secs(60);
const FULL_RUN_BUDGET: Duration = Duration::from_secs(600);
const WREATH_INSTANCES: usize = 50;
const WREATH_MAX_SPACE: u128 = 1 << 16;

struct Criterion {
    id: u32,
    title: &'static str,
    checks: usize,
    failures: Vec<String>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Criterion { id, title, checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn report(&self, elapsed: Duration) -> bool {
        let status = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {}: {status} - {} ({} checks, {} failed, {:.1} s)",
            self.id,
            self.title,
            self.checks,
            self.failures.len(),
            elapsed.as_secs_f64()
        );
        for f in &self.failures {
            println!("    failed: {f}");
        }
        self.failures.is_empty()
    }
}

fn sizes(pairs: &[(u64, u64)]) -> BTreeMap<u64, u64> {
    pairs.iter().copied().collect()
}

fn nonzero(sizes: &BTreeMap<u64, u64>) -> BTreeMap<u64, u64> {
    let mut s = sizes.clone();
    if let Some(m) = s.get_mut(&1) {
        *m -= 1;
        if *m == 0 {
            s.remove(&1);
        }
    }
    s
}

fn criterion_1() -> Criterion {
    let mut c = Criterion::new(1, "catalog exactness");
    let limits = Limits::default();
    let mut reports: BTreeMap<String, CatalogReport> = BTreeMap::new();
    for e in catalog_entries().expect("catalog parses") {
        let start = Instant::now();
        let r = verify_entry(&e, 0, &limits);
        let t = start.elapsed();
        c.check(t < ENTRY_BUDGET, || format!("{} took {t:?}", e.name));
        match r {
            Ok(r) => {
                reports.insert(e.name.clone(), r);
            }
            Err(err) => c.check(false, || format!("{}: {err}", e.name)),
        }
    }
    let profile = |name: &str| reports.get(name).map(|r| r.orbit_sizes.clone()).unwrap_or_default();
    let expected: &[(&str, &[(u64, u64)])] = &[
        ("M23_GL11_2", &[(1, 1), (23, 1), (253, 1), (1771, 1)]),
        ("M11_GL5_3", &[(1, 1), (22, 1), (220, 1)]),
        ("L2_11_GL5_3", &[(1, 1), (22, 1), (110, 2)]),
        ("X214minus_A4_GL4_3", &[(1, 1), (16, 1), (64, 1)]),
        ("X214minus_S4_GL4_3", &[(1, 1), (16, 1), (64, 1)]),
        ("X312_2_GL3_4", &[(1, 1), (9, 4), (27, 1)]),
        ("X312_6_GL3_4", &[(1, 1), (9, 1), (27, 2)]),
        ("X312_S3a_GL3_4", &[(1, 1), (9, 1), (27, 2)]),
        ("X312_S3b_GL3_4", &[(1, 1), (9, 1), (27, 2)]),
        ("X312_D12_GL3_4", &[(1, 1), (9, 1), (27, 2)]),
        (
            "X216plus_L32_GL8_3",
            &[(1, 1), (16, 1), (112, 1), (128, 2), (224, 1), (448, 1), (896, 1), (1024, 1), (1792, 2)],
        ),
        ("X216minus_2A5_GL8_3", &[(1, 1), (160, 1), (1280, 1), (5120, 1)]),
        ("T72S3_GL9_2", &[(1, 1), (21, 1), (49, 7), (147, 1)]),
        ("T73sq2_GL9_2", &[(1, 1), (21, 1), (49, 1), (147, 3)]),
    ];
    for (name, want) in expected {
        let got = profile(name);
        c.check(got == sizes(want), || format!("{name}: expected {:?}, got {got:?}", sizes(want)));
    }
    let sibling = reports.get("M23_GL11_2_sibling");
    c.check(
        sibling.is_some_and(|r| r.status == PexcStatus::BadOrbit && r.orbit_sizes.keys().any(|s| s % 2 == 0)),
        || "the sibling 11-dimensional M23 module has no even orbit".into(),
    );
    let sl = nonzero(&profile("SL2_5_GL4_3"));
    c.check(sl == sizes(&[(40, 2)]), || format!("SL2(5) scalars: nonzero sizes {sl:?}"));
    for q in [2u64, 4, 8] {
        let got = nonzero(&profile(&format!("C4pair_GL4_{q}")));
        let want = sizes(&[(q * q - 1, 2), ((q * q - 1) * (q + 1), q - 1)]);
        c.check(got == want, || format!("c4 pair q = {q}: expected {want:?}, got {got:?}"));
    }
    for (perm, scalars) in [("M11_12", false), ("L2_11", true)] {
        let constituent = |constituent| {
            let recipe = Recipe::DeletedConstituent { perm: perm.into(), p: 3, constituent, scalars };
            build(&recipe, 0, &limits).and_then(|g| g.orbit_partition(&limits)).map(|part| part.sizes())
        };
        match (constituent(Constituent::Sub), constituent(Constituent::Quotient)) {
            (Ok(a), Ok(b)) => c.check(a == b, || format!("{perm}: constituents differ, {a:?} vs {b:?}")),
            (a, b) => c.check(false, || format!("{perm}: constituents failed to build: {a:?} {b:?}")),
        }
    }
    c
}

fn criterion_2() -> Criterion {
    let mut c = Criterion::new(2, "GammaL1 closed form");
    let limits = Limits::default();
    for p in [2u32, 3] {
        for d in (p..=8).step_by(p as usize) {
            for s in (1..=d).filter(|s| d % s == 0) {
                let ps1 = (p as u64).pow(s) - 1;
                for j in (1..=ps1).filter(|j| ps1 % j == 0) {
                    let spec = GammaL1Spec::new(p, d, s, j);
                    let got = gamma_l1(&spec).and_then(|g| g.orbit_partition(&limits)).map(|x| x.nonzero_profile());
                    let want = spec.expected_nonzero_profile();
                    c.check(got.as_ref().ok() == want.as_ref(), || format!("{spec:?}: {got:?} vs {want:?}"));
                }
            }
        }
    }
    c
}

fn criterion_3() -> Criterion {
    let mut c = Criterion::new(3, "deleted permutation modules");
    let limits = Limits::default();
    let cases: &[(u32, &[usize], bool)] =
        &[(2, &[3, 6, 7, 14, 15], true), (2, &[5, 9, 10, 11, 12], false), (3, &[5, 6, 9], false)];
    for &(p, cs, want) in cases {
        for &n in cs {
            for h in [PermGroup::alternating(n).with_label(format!("A{n}")), PermGroup::symmetric(n).with_label(format!("S{n}"))] {
                let label = h.label().unwrap_or_default().to_string();
                let start = Instant::now();
                let verdict = deleted_permutation_module(&h, p).and_then(|g| g.is_p_exceptional(p, &limits));
                let t = start.elapsed();
                c.check(t < DELETED_BUDGET, || format!("{label} at p = {p} took {t:?}"));
                match verdict {
                    Ok(v) => c.check(v.is_p_exceptional() == want, || {
                        format!("{label} at p = {p}: expected exceptional = {want}, got {}", v.status.as_str())
                    }),
                    Err(e) => c.check(false, || format!("{label} at p = {p}: {e}")),
                }
            }
        }
    }
    c
}

fn criterion_4() -> Criterion {
    let mut c = Criterion::new(4, "p-concealed table");
    for (name, p) in [("D10", 2u32), ("AGL3_2", 3), ("AGammaL1_8", 3)] {
        let r = named_perm_group(name).and_then(|h| h.subset_orbits(p, DEFAULT_MAX_SUBSETS));
        c.check(r.as_ref().is_ok_and(|r| r.concealed), || format!("{name} at p = {p}: {r:?}"));
    }
    let s5 = PermGroup::symmetric(5).subset_orbits(2, DEFAULT_MAX_SUBSETS);
    c.check(
        s5.as_ref().is_ok_and(|r| !r.concealed && r.witness.as_ref().is_some_and(|w| w.size % 2 == 0)),
        || format!("S5 at p = 2: {s5:?}"),
    );
    for n in 3..=13usize {
        let a = PermGroup::alternating(n);
        for p in [2u32, 3, 5, 7, 11, 13] {
            let brute = a.subset_orbits(p, DEFAULT_MAX_SUBSETS).map(|r| r.concealed);
            let fast = an_concealed_predicate(n as u64, p as u64);
            c.check(brute == Ok(fast), || format!("A{n} at p = {p}: brute force {brute:?}, closed form {fast}"));
        }
    }
    c
}

fn criterion_5() -> Criterion {
    let mut c = Criterion::new(5, "Jordan oracle equivalence");
    for p in [2u32, 3, 5, 7] {
        let f = FieldSpec::prime(p).expect("prime");
        for b in 1..=p as usize {
            for a in 1..=b {
                let direct = kronecker(&Matrix::jordan_block(&f, a), &Matrix::jordan_block(&f, b))
                    .and_then(|m| jordan_type_unipotent(&m));
                let formula = jordan_tensor(a, b, p);
                c.check(direct.is_ok() && direct == formula, || format!("J_{a} (x) J_{b}, p = {p}: {formula:?} vs {direct:?}"));
            }
        }
    }
    for m in 2..=3usize {
        for p in [2u32, 3, 5] {
            let shape = TensorShape::new(m, p as usize, p).expect("valid shape");
            if shape.dim().is_some_and(|d| d > pexc_core::matrix::MAX_DIM) {
                continue;
            }
            let direct = shape.shift_matrix().and_then(|s| jordan_type_unipotent(&s));
            let formula = cyclic_tensor_shape(m, p);
            c.check(direct.is_ok() && direct == formula, || format!("shift m = {m}, p = {p}: {formula:?} vs {direct:?}"));
        }
    }
    let s = TensorShape::new(2, 2, 2).and_then(|t| t.shift_matrix());
    let three_quarters = num_rational::Ratio::new(3u64, 4);
    c.check(kappa_bound(2, 2) == Ok(three_quarters), || format!("kappa bound (2,2) = {:?}", kappa_bound(2, 2)));
    c.check(s.as_ref().is_ok_and(|s| kappa(s) == three_quarters), || "shift on dimension 4 does not give 3/4".into());
    c
}

fn gf2_group(gens: Vec<Matrix>, label: &str) -> MatGroup {
    let f = FieldSpec::prime(2).expect("prime");
    let n = gens[0].rows();
    MatGroup::new(&f, n, gens).expect("invertible").with_label(label)
}

fn singer(degree: u32) -> Matrix {
    let f = FieldSpec::new(2, degree).expect("field");
    regular_representation(&f, f.primitive_element())
}

/// Inner groups transitive on nonzero vectors, with `|V_1| <= 8`, by characteristic.
fn transitive_inners(p: u32) -> Vec<MatGroup> {
    let f2 = FieldSpec::prime(2).expect("prime");
    let f3 = FieldSpec::prime(3).expect("prime");
    match p {
        2 => {
            let e12 = Matrix::from_rows(&f2, &[vec![1, 1], vec![0, 1]]).expect("2x2");
            let mut e3 = Matrix::identity(&f2, 3);
            e3.set(0, 1, 1);
            let frob3 = pexc_core::matrix::frobenius_matrix(&FieldSpec::new(2, 3).expect("field"), 1);
            vec![
                MatGroup::trivial(&f2, 1).with_label("1"),
                gf2_group(vec![singer(2)], "C3"),
                gf2_group(vec![singer(2), e12], "GL2(2)"),
                gf2_group(vec![singer(3)], "C7"),
                gf2_group(vec![singer(3), frob3], "7:3"),
                gf2_group(vec![singer(3), e3], "GL3(2)"),
            ]
        }
        _ => vec![MatGroup::new(&f3, 1, vec![Matrix::scalar(&f3, 1, 2)]).expect("invertible").with_label("<-1>")],
    }
}

fn concealed_tops(p: u32) -> Vec<PermGroup> {
    let named = |n: &str| named_perm_group(n).expect("stored group");
    match p {
        2 => vec![named("S3"), named("A7"), named("S7"), named("D10")],
        _ => vec![named("A5"), named("S5"), named("A8"), named("S8"), named("AGL3_2"), named("AGammaL1_8")],
    }
}

fn unconcealed_tops(p: u32) -> Vec<PermGroup> {
    let named = |n: &str| named_perm_group(n).expect("named group");
    match p {
        2 => vec![
            named("S2"),
            named("A4"),
            named("S4"),
            PermGroup::cyclic(4).with_label("C4"),
            PermGroup::dihedral(4).with_label("D8"),
            named("A5"),
            named("S5"),
            named("A6"),
            named("S6"),
            named("A8"),
        ],
        _ => vec![
            named("A3"),
            named("S3"),
            named("S4"),
            PermGroup::cyclic(3).with_label("C3"),
            PermGroup::dihedral(6).with_label("D12"),
            named("A6"),
            named("S6"),
            named("A7"),
        ],
    }
}

fn random_relabel(h: &PermGroup, rng: &mut ChaCha8Rng) -> PermGroup {
    let mut perm: Vec<usize> = (0..h.degree()).collect();
    perm.shuffle(rng);
    let label = h.label().unwrap_or("H").to_string();
    h.relabel(&perm).expect("bijection").with_label(label)
}

fn random_instance(rng: &mut ChaCha8Rng, tops: impl Fn(u32) -> Vec<PermGroup>) -> (u32, WreathSpec) {
    loop {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let inner = transitive_inners(p).choose(rng).expect("nonempty").clone();
        let top = tops(p).choose(rng).expect("nonempty").clone();
        if inner.space_size().checked_pow(top.degree() as u32).is_some_and(|s| s <= WREATH_MAX_SPACE) {
            return (p, WreathSpec { inner, top: random_relabel(&top, rng) });
        }
    }
}

fn criterion_6() -> Criterion {
    let mut c = Criterion::new(6, "wreath theorem property");
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for i in 0..WREATH_INSTANCES {
        let (p, spec) = random_instance(&mut rng, concealed_tops);
        let name = format!("#{i} {} wr {} at p = {p}", spec.inner.label().unwrap_or("?"), spec.top.label().unwrap_or("?"));
        let verdict = wreath(&spec).and_then(|g| Ok((g.is_p_exceptional(p, &limits)?, verify_wreath_orbits(&spec, &g, &limits)?)));
        c.check(verdict.as_ref().is_ok_and(|(v, shape)| v.is_p_exceptional() && *shape), || format!("{name}: {verdict:?}"));
    }
    for i in 0..WREATH_INSTANCES {
        let (p, spec) = random_instance(&mut rng, unconcealed_tops);
        let name = format!("#{i} {} wr {} at p = {p}", spec.inner.label().unwrap_or("?"), spec.top.label().unwrap_or("?"));
        let verdict = wreath(&spec).and_then(|g| g.is_p_exceptional(p, &limits));
        c.check(
            verdict.as_ref().is_ok_and(|v| v.status == PexcStatus::BadOrbit && v.witness.is_some_and(|w| w.size % p as u64 == 0)),
            || format!("{name}: {verdict:?}"),
        );
    }
    c
}

fn criterion_7() -> Criterion {
    let mut c = Criterion::new(7, "structural invariant suite");
    let limits = Limits::default();
    let entries = catalog_entries().expect("catalog parses");
    let mut statuses = BTreeMap::new();
    for e in &entries {
        let g = match build(&e.recipe, 0, &limits) {
            Ok(g) => g,
            Err(err) => {
                c.check(false, || format!("{}: {err}", e.name));
                continue;
            }
        };
        let part = g.orbit_partition(&limits).expect("within caps");
        let order = g.order_with(&part);
        c.check(part.is_conserved(), || format!("{}: orbit sizes sum to {}, not {}", e.name, part.sum(), part.total));
        c.check(part.all_sizes_divide(order), || format!("{}: an orbit size does not divide {order}", e.name));
        let status = pexc_core::PexcVerdict::evaluate(e.p, order, &part).status;
        statuses.insert(e.name.clone(), (status, order));
        let scaled = g.with_scalars().is_p_exceptional(e.p, &limits).expect("within caps");
        if status != PexcStatus::OrderNotDivisibleByP && scaled.status != PexcStatus::OrderNotDivisibleByP {
            c.check(scaled.status == status, || format!("{}: scalars change {status:?} to {:?}", e.name, scaled.status));
        }
        if status == PexcStatus::PExceptional {
            match g.random_element_of_prime_order(e.p, 0) {
                Some(t) => {
                    let cover = g.fixed_point_cover(e.p, &t, &limits);
                    c.check(cover.as_ref().is_ok_and(|x| x.covered), || format!("{}: fixed-point cover {cover:?}", e.name));
                }
                None => c.check(false, || format!("{}: no element of order {} found", e.name, e.p)),
            }
        }
        if matches!(e.recipe, Recipe::Extraspecial { .. }) && status == PexcStatus::PExceptional {
            let residual = g.p_residual(e.p, &limits).and_then(|r| r.is_p_exceptional(e.p, &limits));
            c.check(residual.as_ref().is_ok_and(|v| v.is_p_exceptional()), || format!("{}: p-residual {residual:?}", e.name));
        }
    }
    for e in &entries {
        let Some(parent) = &e.normal_in else { continue };
        let (Some(&(child, order)), Some(&(up, _))) = (statuses.get(&e.name), statuses.get(parent)) else {
            c.check(false, || format!("{}: missing normal pair {parent}", e.name));
            continue;
        };
        if up == PexcStatus::PExceptional && order % e.p as u128 == 0 {
            c.check(child == PexcStatus::PExceptional, || format!("{} normal in {parent} but {child:?}", e.name));
        }
    }
    c
}

fn criterion_8() -> Criterion {
    let mut c = Criterion::new(8, "determinism");
    let run = || {
        let start = Instant::now();
        let out = Command::new(env!("CARGO_BIN_EXE_pexc"))
            .args(["catalog", "verify", "--all", "--seed", "0"])
            .output()
            .expect("binary runs");
        (out, start.elapsed())
    };
    let (a, ta) = run();
    let (b, tb) = run();
    c.check(a.status.success() && b.status.success(), || format!("exit codes {:?} and {:?}", a.status, b.status));
    c.check(!a.stdout.is_empty() && a.stdout == b.stdout, || "two runs produced different JSON".into());
    c.check(ta + tb < FULL_RUN_BUDGET, || format!("two full runs took {:?}", ta + tb));
    c
}

fn main() {
    let runs: [&dyn Fn() -> Criterion; 8] = [
        &criterion_1,
        &criterion_2,
        &criterion_3,
        &criterion_4,
        &criterion_5,
        &criterion_6,
        &criterion_7,
        &criterion_8,
    ];
    let criteria: Vec<(Criterion, Duration)> = runs
        .iter()
        .map(|run| {
            let start = Instant::now();
            (run(), start.elapsed())
        })
        .collect();
    let mut all = true;
    for (c, t) in &criteria {
        all &= c.report(*t);
    }
    if !all {
        std::process::exit(1);
    }
}
