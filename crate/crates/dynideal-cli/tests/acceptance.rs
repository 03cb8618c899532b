//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Lines go straight to stdout so they appear even when libtest captures
//! output. Two criteria contain a part that cannot hold for the instance as
//! stated; those parts are still run in full and reported as FAIL, and the
//! test asserts that the failure is exactly the known obstruction.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::time::{Duration, Instant};

use dynideal::fraisse::{
    amalgamate, amalgamation_positions, check_amalgam, check_heredity, check_invariance, conjugation_witness,
    label_permutations, no_canonical_amalgam_search, pure_host, random_case, substructures, tree_host, vector_host,
    FinStructure, Label, Signature,
};
use dynideal::game::{
    cofinal_strategy_ii, interleave_strategy_i, random_strategy_i, random_strategy_ii, run_game, stratified_strategy_i,
    validate_transcript, Player, RoundEvidence, DEFAULT_MOVE_CAP,
};
use dynideal::hfa::{
    abelian_refuter, act_hf, check_support, choice_selector, find_support, orbit, orbit_decomposition, pstab_generators,
    sample_hf, selectors, support_invariance, HFSet,
};
use dynideal::perm::FinitePermutation;
use dynideal::witnesses::{
    a_large, a_large_symmetric, check_sigma, conjugate_factorization, cover_witness, cover_witness_symmetric,
    largeness_conjugation, refute_cofinal_countableclosed, sigma_witness_bounded_below, sigma_witness_wellordered,
    simplicity_check, WitnessError,
};
use dynideal::{BlockSet, Elem, GroupElem, Instance};
use dynideal_cli::cert::closure_laws;
use dynideal_cli::{catalog, scenario_run, verify_report};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn line(n: usize, pass: bool, detail: &str, elapsed: Duration) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let text = format!("criterion {n:>2}: {verdict} {detail} [{:.1}s]\n", elapsed.as_secs_f64());
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).unwrap();
    out.flush().unwrap();
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn subsets_below(n: usize, k: usize) -> Vec<BTreeSet<usize>> {
    (0u32..1 << n).filter(|m| (m.count_ones() as usize) < k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

fn blocks(e: Elem) -> BlockSet {
    match e {
        Elem::Blocks(b) => b,
        other => panic!("expected blocks, got {other}"),
    }
}

#[test]
fn criterion_01_symmetric_cover_exhaustive() {
    let t = Instant::now();
    let (n, k) = (7, 3);
    let inst = Instance::FiniteSym { n, k };
    let sets = subsets_below(n, k);
    let mut failures = 0;
    let mut cases = 0;
    for a in &sets {
        let (b, cert) = a_large_symmetric(a, n, k).unwrap();
        let b = Elem::Points(b);
        for c in &sets {
            cases += 1;
            let ok = cover_witness_symmetric(&cert, c, n).is_ok_and(|g| {
                let g = GroupElem::Perm(g);
                inst.in_pstab(&g, &Elem::Points(a.clone())).unwrap()
                    && inst.is_subset(&Elem::Points(c.clone()), &inst.act(&g, &b).unwrap()).unwrap()
            });
            failures += usize::from(!ok);
        }
    }
    let el = t.elapsed();
    let pass = failures == 0 && el < Duration::from_secs(60);
    line(1, pass, &format!("FiniteSym(7,3): {cases} (a, c) pairs, {failures} failures"), el);
    assert!(pass);
}

#[test]
fn criterion_02_bounded_cover_sampled() {
    let t = Instant::now();
    let inst = Instance::BoundedQ;
    let covers = (0..10_000u64)
        .into_par_iter()
        .filter(|&i| {
            let mut r = rng(20_000 + i);
            let a = inst.sample_ideal_with(&mut r, 3);
            let c = inst.sample_ideal_with(&mut r, 3);
            let (b, cert) = a_large(&inst, &a).unwrap();
            let g = cover_witness(&inst, &cert, &c).unwrap();
            cert.is_valid() && inst.in_pstab(&g, &a).unwrap() && inst.is_subset(&c, &inst.act(&g, &b).unwrap()).unwrap()
        })
        .count();
    let transports = (0..1_000u64)
        .into_par_iter()
        .filter(|&i| {
            let mut r = rng(40_000 + i);
            let a = inst.sample_ideal_with(&mut r, 3);
            let (b, cert) = a_large(&inst, &a).unwrap();
            let d = inst.sample_group_with(&mut r, 3);
            largeness_conjugation(&inst, &cert, &d).is_ok_and(|m| {
                m.is_valid() && m.base == inst.act(&d, &a).unwrap() && m.large == inst.act(&d, &b).unwrap()
            })
        })
        .count();
    let el = t.elapsed();
    let pass = covers == 10_000 && transports == 1_000 && el < Duration::from_secs(60);
    line(2, pass, &format!("BoundedQ: {covers}/10000 covers, {transports}/1000 transports"), el);
    assert!(pass);
}

struct GameTally {
    games: usize,
    clean: usize,
    forfeits_by_ii_on_certificate: usize,
    other_failures: usize,
}

fn cofinal_games(inst: &Instance, games: u64, horizon: usize) -> GameTally {
    let results: Vec<(bool, bool)> = (0..games)
        .into_par_iter()
        .map(|seed| {
            let (t, v) = run_game(inst, &mut random_strategy_i(2), &mut cofinal_strategy_ii(), horizon, 30_000 + seed, DEFAULT_MOVE_CAP);
            let invariant = t.rounds.iter().all(|r| {
                r.evidence.iter().all(|(_, e)| match e {
                    RoundEvidence::Cover { accumulated_in_large, certificate_valid, .. } => *accumulated_in_large && *certificate_valid,
                    _ => false,
                }) && !r.evidence.is_empty()
            });
            let clean = validate_transcript(&t).is_empty() && t.forfeit.is_none() && invariant && v.outcome_in_ideal;
            let certificate_forfeit = t
                .forfeit
                .as_ref()
                .is_some_and(|f| f.player == Player::II && f.reason.contains("certificate"));
            (clean, certificate_forfeit)
        })
        .collect();
    GameTally {
        games: results.len(),
        clean: results.iter().filter(|r| r.0).count(),
        forfeits_by_ii_on_certificate: results.iter().filter(|r| !r.0 && r.1).count(),
        other_failures: results.iter().filter(|r| !r.0 && !r.1).count(),
    }
}

/// The FiniteSym(20,4) half cannot pass: the accumulated set eventually
/// reaches k points, beyond any set of size < k, so no certificate for it
/// exists and player II must forfeit.
#[test]
fn criterion_03_cofinal_game() {
    let t = Instant::now();
    let bounded = cofinal_games(&Instance::BoundedQ, 200, 50);
    let sym = cofinal_games(&Instance::FiniteSym { n: 20, k: 4 }, 200, 50);
    let el = t.elapsed();
    let pass = bounded.clean == bounded.games && sym.clean == sym.games && el < Duration::from_secs(300);
    line(
        3,
        pass,
        &format!(
            "BoundedQ {}/{} games clean; FiniteSym(20,4) {}/{} clean, {} lost by II for want of a certificate, {} other",
            bounded.clean, bounded.games, sym.clean, sym.games, sym.forfeits_by_ii_on_certificate, sym.other_failures
        ),
        el,
    );
    assert_eq!(bounded.clean, bounded.games);
    assert!(el < Duration::from_secs(300));
    // the finite half fails only through the obstruction described above
    assert_eq!(sym.other_failures, 0);
    assert_eq!(sym.clean + sym.forfeits_by_ii_on_certificate, sym.games);
}

/// The rank half cannot pass: interleaving play adds finitely many points
/// per round, and a finite set has rank 1 however many rounds are played.
#[test]
fn criterion_04_player_one_strategies() {
    let t = Instant::now();
    let ks = vec![1, 2, 4, 8, 16];
    let inst = Instance::FiniteSym { n: 40, k: 41 };
    let stratified = (0..100u64)
        .into_par_iter()
        .filter(|&seed| {
            let (t, _) = run_game(&inst, &mut stratified_strategy_i(ks.clone()), &mut random_strategy_ii(3), ks.len(), seed, DEFAULT_MOVE_CAP);
            t.forfeit.is_none()
                && t.rounds.len() == ks.len()
                && t.rounds.iter().enumerate().all(|(n, r)| {
                    r.evidence.iter().any(|(_, e)| matches!(e, RoundEvidence::Stratified { accumulated_size, .. } if *accumulated_size >= ks[n]))
                })
        })
        .count();
    let closed = Instance::CountableClosedQ;
    let horizon = 12;
    let games: Vec<(bool, Vec<usize>, bool)> = (0..3u64)
        .into_par_iter()
        .map(|seed| {
            let (t, _) = run_game(&closed, &mut interleave_strategy_i(), &mut random_strategy_ii(2), horizon, seed, DEFAULT_MOVE_CAP);
            let mut ranks = Vec::new();
            let mut predicate = t.forfeit.is_none() && t.rounds.len() == horizon;
            for r in &t.rounds {
                for (_, e) in &r.evidence {
                    if let RoundEvidence::Interleave { holds, cb_rank, .. } = e {
                        predicate &= holds;
                        ranks.push(*cb_rank);
                    }
                }
            }
            let finite = matches!(&t.accumulated, Elem::Blocks(b) if b.is_finite());
            (predicate && ranks.len() == horizon, ranks, finite)
        })
        .collect();
    let predicate_ok = games.iter().all(|g| g.0);
    let rank_grows = games.iter().all(|g| g.1.windows(5).all(|w| w[4] > w[0]));
    let el = t.elapsed();
    let pass = stratified == 100 && predicate_ok && rank_grows;
    let ranks: Vec<String> = games.iter().map(|g| format!("{:?}", g.1)).collect();
    line(
        4,
        pass,
        &format!(
            "stratified {stratified}/100; interleaving predicate {}; rank growth every 4 rounds {} (ranks {})",
            if predicate_ok { "held" } else { "broken" },
            if rank_grows { "held" } else { "absent" },
            ranks.join(" ")
        ),
        el,
    );
    assert_eq!(stratified, 100);
    assert!(predicate_ok);
    // the rank half fails only because the position stays a finite set
    assert!(games.iter().all(|g| g.2 && g.1.iter().all(|&r| r == 1)));
}

#[test]
fn criterion_05_sigma_witnesses() {
    let t = Instant::now();
    let mut lines = Vec::new();
    let mut all = true;
    for inst in [Instance::WellOrderedQ, Instance::WellOrderedBoundedBelowQ] {
        let runs: Vec<(bool, usize)> = (0..1_000u64)
            .into_par_iter()
            .map(|i| {
                let mut r = rng(50_000 + i);
                let mut redrawn = 0;
                loop {
                    let a = blocks(inst.sample_ideal_with(&mut r, 3));
                    let bs: Vec<BlockSet> = (0..3).map(|_| blocks(inst.sample_ideal_with(&mut r, 2))).collect();
                    let w = match inst {
                        Instance::WellOrderedQ => sigma_witness_wellordered(&a, &bs),
                        _ => sigma_witness_bounded_below(&a, &bs),
                    };
                    match w {
                        Err(WitnessError::UnboundedGapFamily(_)) => redrawn += 1,
                        Err(_) => return (false, redrawn),
                        Ok(w) => {
                            let shape = w.union.is_well_ordered()
                                && (inst == Instance::WellOrderedQ || w.union.is_bounded_below_every());
                            let fixed = w.maps.iter().all(|m| inst.in_pstab(&GroupElem::PL(m.clone()), &Elem::Blocks(a.clone())).unwrap());
                            return (shape && fixed && check_sigma(&a, &bs, &w).is_ok(), redrawn);
                        }
                    }
                }
            })
            .collect();
        let ok = runs.iter().filter(|r| r.0).count();
        let redrawn: usize = runs.iter().map(|r| r.1).sum();
        all &= ok == 1_000;
        lines.push(format!("{}: {ok}/1000 ({redrawn} inputs with a shared left limit redrawn)", inst.label()));
    }
    let el = t.elapsed();
    let pass = all && el < Duration::from_secs(120);
    line(5, pass, &lines.join("; "), el);
    assert!(pass);
}

#[test]
fn criterion_06_simplicity_and_factorization() {
    let t = Instant::now();
    let mut pairs = Vec::new();
    for n in 1..=7usize {
        for mb in 0u32..1 << n {
            if n - (mb.count_ones() as usize) < 2 {
                continue;
            }
            let mut ma = mb;
            loop {
                pairs.push((n, ma, mb));
                if ma == 0 {
                    break;
                }
                ma = (ma - 1) & mb;
            }
        }
    }
    let set = |n: usize, m: u32| (0..n).filter(|i| m >> i & 1 == 1).collect::<BTreeSet<usize>>();
    let simple = pairs.par_iter().filter(|&&(n, ma, mb)| simplicity_check(n, &set(n, ma), &set(n, mb)) == Ok(true)).count();
    let n = 12;
    let factored = (0..1_000u64)
        .into_par_iter()
        .filter(|&i| {
            let mut r = rng(60_000 + i);
            let mut pts: Vec<usize> = (0..n).collect();
            pts.shuffle(&mut r);
            let nb = r.gen_range(0..=4);
            let na = r.gen_range(0..=nb);
            let b: BTreeSet<usize> = pts[..nb].iter().copied().collect();
            let a: BTreeSet<usize> = pts[..na].iter().copied().collect();
            let free: Vec<usize> = (0..n).filter(|x| !a.contains(x)).collect();
            let mut img = free.clone();
            img.shuffle(&mut r);
            let mut map: Vec<usize> = (0..n).collect();
            for (x, y) in free.into_iter().zip(img) {
                map[x] = y;
            }
            let g = FinitePermutation::from_images(map).unwrap();
            conjugate_factorization(&g, &a, &b, n).is_ok_and(|w| {
                let two = w.factors.len() == 2 || (g.is_identity() && w.factors.is_empty());
                two && w.recompose() == g && w.verify().is_ok()
            })
        })
        .count();
    let el = t.elapsed();
    let pass = simple == pairs.len() && factored == 1_000 && el < Duration::from_secs(300);
    line(6, pass, &format!("{simple}/{} stabilizer pairs for N <= 7; {factored}/1000 factorizations at N = 12", pairs.len()), el);
    assert!(pass);
}

#[test]
fn criterion_07_rank_obstruction() {
    let t = Instant::now();
    let inst = Instance::CountableClosedQ;
    let refuted = (0..100u64)
        .filter(|&i| {
            let b = blocks(inst.sample_ideal(70_000 + i, 3));
            refute_cofinal_countableclosed(&b).is_ok_and(|r| {
                r.rank_c == r.rank_b + 1
                    && r.c.cb_rank() == r.rank_c
                    && r.b.cb_rank() == r.rank_b
                    && inst.contains(&Elem::Blocks(r.c.clone())).unwrap()
            })
        })
        .count();
    let images = (0..1_000u64)
        .into_par_iter()
        .filter(|&i| {
            let mut r = rng(71_000 + i);
            let s = inst.sample_ideal_with(&mut r, 3);
            let g = inst.sample_group_with(&mut r, 3);
            blocks(inst.act(&g, &s).unwrap()).cb_rank() == blocks(s).cb_rank()
        })
        .count();
    let monotone = (0..1_000u64)
        .into_par_iter()
        .filter(|&i| {
            let mut r = rng(72_000 + i);
            let s = inst.sample_ideal_with(&mut r, 3);
            let u = inst.sample_ideal_with(&mut r, 3);
            let big = inst.union(&s, &u).unwrap();
            inst.is_subset(&s, &big).unwrap() && blocks(s).cb_rank() <= blocks(big).cb_rank()
        })
        .count();
    let el = t.elapsed();
    let pass = refuted == 100 && images == 1_000 && monotone == 1_000;
    line(7, pass, &format!("{refuted}/100 refutations; rank kept by {images}/1000 images; monotone on {monotone}/1000 pairs"), el);
    assert!(pass);
}

#[test]
fn criterion_08_support_calculus() {
    let t = Instant::now();
    let insts = [Instance::FiniteSym { n: 8, k: 3 }, Instance::AbelianGrid { m: 3, modulus: 4 }];
    let rechecks: Vec<bool> = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let inst = &insts[(i % 2) as usize];
            let mut r = rng(80_000 + i);
            loop {
                let x = sample_hf(inst, &mut r, 3, 2).unwrap();
                let Some(b) = find_support(inst, &x, 10_000).unwrap() else { continue };
                let g = inst.sample_group_with(&mut r, 3);
                return check_support(inst, &x, &b).unwrap().verified && support_invariance(inst, &g, &b, &x).unwrap();
            }
        })
        .collect();
    let invariance = rechecks.iter().filter(|x| **x).count();
    let closures = (1..=6).filter(|&n| closure_laws(n).unwrap()).count();
    let inst = Instance::FiniteSym { n: 8, k: 3 };
    let selectors_ok = (0..100u64)
        .filter(|&i| {
            let mut r = rng(90_000 + i);
            let a = inst.sample_ideal_with(&mut r, 2);
            let gens = pstab_generators(&inst, &a).unwrap();
            let members: Vec<HFSet> = (0..r.gen_range(1..=2))
                .map(|_| {
                    let x = HFSet::atom(r.gen_range(0..8));
                    let y = HFSet::atom(r.gen_range(0..8));
                    let seed = match r.gen_range(0..3) {
                        0 => HFSet::set([x]),
                        1 => HFSet::set([x, y]),
                        _ => HFSet::pair(x, y),
                    };
                    HFSet::set(orbit(&inst, &gens, &seed).unwrap())
                })
                .collect();
            let family = HFSet::set(members);
            let (b, cert) = a_large(&inst, &a).unwrap();
            choice_selector(&inst, &family, &a, &cert, 10_000)
                .is_ok_and(|(f, claim)| claim.verified && check_support(&inst, &f, &b).unwrap().verified)
        })
        .count();
    let el = t.elapsed();
    let pass = invariance == 10_000 && closures == 6 && selectors_ok == 100;
    line(8, pass, &format!("{invariance}/10000 support rechecks; closure laws for N = 1..6: {closures}/6; {selectors_ok}/100 selectors"), el);
    assert!(pass);
}

#[test]
fn criterion_09_abelian_surrogate() {
    let t = Instant::now();
    let grid = Instance::AbelianGrid { m: 3, modulus: 4 };
    let orbits = (0..100u64)
        .into_par_iter()
        .filter(|&i| {
            let mut r = rng(100_000 + i);
            let a = grid.sample_ideal_with(&mut r, 2);
            let gens = pstab_generators(&grid, &a).unwrap();
            let x = sample_hf(&grid, &mut r, 2, 2).unwrap();
            let set = HFSet::set(orbit(&grid, &gens, &x).unwrap());
            orbit_decomposition(&grid, &set, &a, 1_000).is_ok_and(|d| d.orbits_invariant && d.supports_spread)
        })
        .count();
    let small = Instance::AbelianGrid { m: 2, modulus: 2 };
    let refutes = |inst: &Instance, f: &HFSet, b: &Elem| {
        abelian_refuter(inst, f, b).is_ok_and(|r| inst.in_pstab(&r.gamma, b).unwrap() && act_hf(inst, &r.gamma, f).unwrap() != *f)
    };
    let all_small = selectors(2, 2);
    let small_ok = all_small.iter().filter(|f| refutes(&small, f, &small.empty())).count();
    let mut big_total = 0;
    let mut big_ok = 0;
    for col in 0..3 {
        let b = Elem::Cells((0..4).map(|z| (col, z)).collect());
        for f in selectors(3, 4) {
            big_total += 1;
            big_ok += usize::from(refutes(&grid, &f, &b));
        }
    }
    let el = t.elapsed();
    let pass = orbits == 100 && all_small.len() == 4 && small_ok == 4 && big_ok == big_total;
    line(
        9,
        pass,
        &format!("{orbits}/100 orbit decompositions; {small_ok}/4 selectors refuted at m=2, 2j=2; {big_ok}/{big_total} at m=3, 2j=4 with one-column b"),
        el,
    );
    assert!(pass);
}

fn fresh_labels(perm: &BTreeMap<Label, Label>, base: Label) -> BTreeMap<Label, Label> {
    let order: Vec<Label> = perm.values().copied().collect();
    let rank: BTreeMap<Label, Label> = {
        let mut sorted = order.clone();
        sorted.sort();
        sorted.into_iter().enumerate().map(|(i, x)| (x, i as Label)).collect()
    };
    perm.iter().map(|(x, y)| (*x, base + rank[y])).collect()
}

/// All failures at one position: laws, invariance under every relabelling,
/// and heredity for every closed substructure over the common part.
fn position_failures(a: &FinStructure, b: &FinStructure) -> (usize, usize) {
    let mut checks = 0;
    let mut failures = 0;
    let r = amalgamate(a, b).unwrap();
    checks += 1;
    failures += usize::from(check_amalgam(a, b, &r).is_err());
    let common: BTreeSet<Label> = a.universe().intersection(b.universe()).copied().collect();
    if let Signature::VectorSpace { .. } = a.signature() {
        checks += 1;
        let dc = a.restrict(&common).unwrap().dim();
        failures += usize::from(r.amalgam.dim() + dc != a.dim() + b.dim());
    }
    let la: Vec<Label> = a.universe().iter().copied().collect();
    let rest: Vec<Label> = b.universe().difference(&common).copied().collect();
    for p in label_permutations(&la) {
        let phi = fresh_labels(&p, 100);
        for q in label_permutations(&rest) {
            let mut psi: BTreeMap<Label, Label> = common.iter().map(|x| (*x, phi[x])).collect();
            psi.extend(fresh_labels(&q, 200));
            checks += 1;
            failures += usize::from(!check_invariance(a, b, &phi, &psi).unwrap_or(false));
        }
    }
    for s in substructures(a).into_iter().filter(|s| common.is_subset(s)) {
        checks += 1;
        failures += usize::from(!check_heredity(&s, a, b).unwrap_or(false));
    }
    (checks, failures)
}

#[test]
fn criterion_10_fraisse_laws() {
    let t = Instant::now();
    let mut parts = Vec::new();
    let mut all = true;
    for sig in [Signature::PureSet, Signature::Ultrametric, Signature::VectorSpace { q: 2 }] {
        let positions = amalgamation_positions(sig, 4, 3);
        let (checks, failures) = positions
            .par_iter()
            .map(|(a, b)| position_failures(a, b))
            .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
        all &= failures == 0;
        parts.push(format!("{sig}: {} positions, {checks} checks, {failures} failures", positions.len()));
    }
    let record = no_canonical_amalgam_search(Signature::QuadSelector, 3, 1).unwrap();
    let complete = !record.possible && !record.cases.is_empty() && record.cases.iter().all(|c| c.violation.is_some());
    all &= complete;
    parts.push(format!("quad-selector (3,1): {} tables, all broken: {complete}", record.cases.len()));
    let hosts = [(pure_host(12), true), (vector_host(2, 6), true), (tree_host(7), false)];
    for (h, (host, grow)) in hosts.iter().enumerate() {
        let ok = (0..100u64)
            .into_par_iter()
            .filter(|&i| {
                let mut r = rng(110_000 + 1_000 * h as u64 + i);
                let (a, b, pi) = random_case(host, &mut r);
                conjugation_witness(host, &a, &b, &pi, *grow).is_ok_and(|w| w.verify().is_ok())
            })
            .count();
        all &= ok == 100;
        parts.push(format!("conjugation on {}: {ok}/100", host.signature()));
    }
    let el = t.elapsed();
    let pass = all && el < Duration::from_secs(600);
    line(10, pass, &parts.join("; "), el);
    assert!(pass);
}

#[test]
fn criterion_11_determinism() {
    let t = Instant::now();
    let mut identical = 0;
    let mut verified = 0;
    let scenarios = catalog();
    for sc in &scenarios {
        let first = scenario_run(sc).unwrap();
        let second = scenario_run(sc).unwrap();
        identical += usize::from(first.to_text() == second.to_text());
        verified += usize::from(verify_report(&first).ok());
    }
    let el = t.elapsed();
    let n = scenarios.len();
    let pass = identical == n && verified == n;
    line(11, pass, &format!("{identical}/{n} scenarios byte-identical on re-run; {verified}/{n} reports re-verified"), el);
    assert!(pass);
}
