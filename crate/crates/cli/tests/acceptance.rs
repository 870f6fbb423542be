//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use pnbisim::corpus::{generate, hand_made, marked_nets, split, split_m0, Case, Limits};
use pnbisim::engine::witness::{replay_distinguishing, validate_witness, GameEvidence};
use pnbisim::engine::{decide, decide_interleaving, oracle_game, Flavor, GameConfig, Outcome, Verdict};
use pnbisim::indexed::{im_successors, reachable_im};
use pnbisim::ordered::{oim_successors, reachable_oim};
use pnbisim::process::{coherence_violations, for_each_sequence, minimality_holds, step_correspondence_holds};
use pnbisim::{IndexedMarking, Oim, PlaceId, Token};

type Check = Result<String, String>;

const CORPUS_SEED: u64 = 1;
const CORPUS_NETS: usize = 200;
const ORACLE_DEPTH: u32 = 5;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let el = start.elapsed();
    ensure(el < limit, || format!("took {el:.2?}, limit {limit:?}"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn tok(p: u32, i: u32) -> Token {
    Token::new(PlaceId(p), i)
}

fn cli_golden() -> Check {
    let witness = tempfile::NamedTempFile::new().map_err(|e| e.to_string())?;
    let net = data("two_a.pn");
    let mut lines = Vec::new();
    for (equiv, expected) in [("fc", 0), ("cn", 1)] {
        let start = Instant::now();
        let out = Command::new(env!("CARGO_BIN_EXE_pnbisim"))
            .args(["check", "--equiv", equiv, "--cap", "1", "--witness"])
            .arg(witness.path())
            .arg(&net)
            .args(["m_s1", "m_s3"])
            .output()
            .map_err(|e| e.to_string())?;
        within(Duration::from_secs(1), start)?;
        let code = out.status.code();
        ensure(code == Some(expected), || format!("{equiv}: exit {code:?}, expected {expected}"))?;
        let text = std::fs::read_to_string(witness.path()).map_err(|e| e.to_string())?;
        let kind = if expected == 0 { "witness" } else { "distinguishing" };
        ensure(text.starts_with(kind), || format!("{equiv}: evidence file starts {:?}", text.lines().next()))?;
        lines.push(format!("{equiv} exit {expected} in {:.0?}", start.elapsed()));
    }
    Ok(lines.join(", "))
}

fn indexed_golden() -> Check {
    let start = Instant::now();
    let net = split();
    let (s1, s2, s3) = (0, 1, 2);
    let k0 = IndexedMarking::initial(&split_m0());
    let t2 = net.transition_by_name("t2").ok_or("no t2")?;
    let pre = &net.transition(t2).pre;
    let got: BTreeSet<IndexedMarking> = k0.box_minus(pre).map_err(|e| e.to_string())?.into_iter().collect();
    let expected: BTreeSet<IndexedMarking> = [
        IndexedMarking::of(&[(s1, 1), (s2, 2), (s2, 3)]),
        IndexedMarking::of(&[(s1, 1), (s2, 1), (s2, 3)]),
        IndexedMarking::of(&[(s1, 1), (s2, 1), (s2, 2)]),
    ]
    .into();
    ensure(got == expected, || format!("k0 ⊟ •t2 = {got:?}"))?;

    let fire = |k: &IndexedMarking, t: &str, removed: &[Token]| {
        im_successors(&net, k)
            .into_iter()
            .find(|m| net.transition(m.transition).name == t && m.removed == removed)
            .map(|m| m.result)
    };
    let k1 = fire(&k0, "t2", &[tok(s2, 2)]).ok_or("t2 cannot delete (s2,2)")?;
    ensure(k1 == IndexedMarking::of(&[(s1, 1), (s2, 1), (s2, 3), (s3, 1)]), || format!("k1 = {k1:?}"))?;
    let k2 = fire(&k1, "t1", &[tok(s1, 1)]).ok_or("t1 not enabled")?;
    let expected_k2 = IndexedMarking::of(&[(s2, 1), (s2, 2), (s2, 3), (s2, 4), (s3, 1)]);
    ensure(k2 == expected_k2, || format!("k2 = {k2:?}"))?;

    let bound = net.reachable(&split_m0(), 8).map_err(|e| e.to_string())?.bound;
    ensure(bound == 5, || format!("bound {bound}"))?;
    ensure(net.reachable(&split_m0(), 4).is_err(), || "cap 4 accepted".into())?;
    within(Duration::from_secs(1), start)?;
    Ok(format!("3 deletions, k2 matches, bound {bound}"))
}

fn ordered_golden() -> Check {
    let net = split();
    let (s1, s2, s3) = (0, 1, 2);
    let o0 = Oim::initial(&IndexedMarking::initial(&split_m0()));
    let mv = oim_successors(&net, &o0)
        .into_iter()
        .find(|m| net.transition(m.transition).name == "t2" && m.removed == [tok(s2, 2)])
        .ok_or("t2 cannot delete (s2,2)")?;
    let untouched = [tok(s1, 1), tok(s2, 1), tok(s2, 3)];
    let mut expected: BTreeSet<(Token, Token)> = untouched
        .iter()
        .flat_map(|&a| untouched.iter().map(move |&b| (a, b)))
        .collect();
    for a in [tok(s1, 1), tok(s2, 1), tok(s2, 3), tok(s3, 1)] {
        expected.insert((a, tok(s3, 1)));
    }
    let got: BTreeSet<(Token, Token)> = mv.result.order_pairs().into_iter().collect();
    ensure(got == expected, || format!("≤1 = {got:?}"))?;
    Ok(format!("{} pairs", got.len()))
}

fn coherence() -> Check {
    let start = Instant::now();
    let mut sequences = 0usize;
    let mut failures = Vec::new();
    for (name, net, m) in marked_nets() {
        for_each_sequence(&net, &IndexedMarking::initial(&m), 6, |ps| {
            sequences += 1;
            let ok = coherence_violations(ps).is_empty()
                && minimality_holds(ps)
                && ps.delta_is_bijective()
                && step_correspondence_holds(&net, ps);
            if !ok && failures.len() < 3 {
                failures.push(format!("{name}: {}", ps.process.show(&net)));
            }
        });
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    within(Duration::from_secs(60), start)?;
    Ok(format!("{sequences} sequences over 5 nets in {:.1?}", start.elapsed()))
}

/// Everything the corpus-based criteria need, computed once.
struct Row {
    case: Case,
    fc: Verdict<GameEvidence>,
    cn: Verdict<GameEvidence>,
    il: Outcome,
    oracle_fc: Outcome,
    oracle_cn: Outcome,
}

fn corpus() -> Vec<Case> {
    let mut cases = hand_made();
    cases.extend(generate(CORPUS_SEED, CORPUS_NETS, &Limits::default()));
    cases
}

fn run_corpus(cases: Vec<Case>) -> Vec<Row> {
    let bound = Limits::default().bound;
    cases
        .into_par_iter()
        .map(|case| {
            let (net, m1, m2) = (&case.net, &case.m1, &case.m2);
            let fc = decide(net, m1, m2, bound, &GameConfig::new(Flavor::Fc)).expect("bounded");
            let cn = decide(net, m1, m2, bound, &GameConfig::new(Flavor::Cn)).expect("bounded");
            let il = decide_interleaving(net, m1, m2, bound).expect("bounded").outcome;
            let oracle_fc = oracle_game(net, m1, m2, Flavor::Fc, ORACLE_DEPTH).outcome;
            let oracle_cn = oracle_game(net, m1, m2, Flavor::Cn, ORACLE_DEPTH).outcome;
            Row {
                case,
                fc,
                cn,
                il,
                oracle_fc,
                oracle_cn,
            }
        })
        .collect()
}

fn oracle_agreement(rows: &[Row], elapsed: Duration) -> Check {
    let nets: BTreeSet<String> = rows
        .iter()
        .filter_map(|r| r.case.name.rsplit_once('-').map(|(n, _)| n.to_string()))
        .filter(|n| n.starts_with("random"))
        .collect();
    ensure(nets.len() >= 200, || format!("only {} random nets", nets.len()))?;
    let mut conclusive = [0; 2];
    let mut bad = Vec::new();
    for r in rows {
        for (k, (game, oracle)) in [(r.fc.outcome, r.oracle_fc), (r.cn.outcome, r.oracle_cn)].into_iter().enumerate() {
            if oracle.is_conclusive() {
                conclusive[k] += 1;
                if game != oracle {
                    bad.push(format!("{} {}: game {game}, oracle {oracle}", r.case.name, ["fc", "cn"][k]));
                }
            }
        }
    }
    ensure(bad.is_empty(), || format!("{} disagreements: {}", bad.len(), bad.join("; ")))?;
    ensure(elapsed < Duration::from_secs(600), || format!("took {elapsed:.1?}"))?;
    Ok(format!(
        "{} nets, {} pairs, conclusive fc {} cn {}, 0 disagreements in {:.1?}",
        nets.len(),
        rows.len(),
        conclusive[0],
        conclusive[1],
        elapsed
    ))
}

fn hierarchy(rows: &[Row]) -> Check {
    let eq = Outcome::Equivalent;
    let mut bad = Vec::new();
    let mut counts = [0; 3];
    for r in rows {
        let (cn, fc, il) = (r.cn.outcome, r.fc.outcome, r.il);
        counts[0] += usize::from(cn == eq);
        counts[1] += usize::from(fc == eq);
        counts[2] += usize::from(il == eq);
        if (cn == eq && fc != eq) || (fc == eq && il != eq) {
            bad.push(format!("{}: cn {cn} fc {fc} il {il}", r.case.name));
        }
    }
    ensure(bad.is_empty(), || bad.join("; "))?;
    let find = |name: &str| rows.iter().find(|r| r.case.name == name).ok_or(format!("no case {name}"));
    let pc = find("parallel-vs-choice")?;
    ensure(pc.il == eq && pc.fc.outcome == Outcome::NotEquivalent, || {
        format!("parallel-vs-choice: il {} fc {}", pc.il, pc.fc.outcome)
    })?;
    let ta = find("two-a")?;
    ensure(ta.fc.outcome == eq && ta.cn.outcome == Outcome::NotEquivalent, || {
        format!("two-a: fc {} cn {}", ta.fc.outcome, ta.cn.outcome)
    })?;
    Ok(format!(
        "equivalent pairs: cn {} <= fc {} <= il {}",
        counts[0], counts[1], counts[2]
    ))
}

fn finiteness(rows: &[Row]) -> Check {
    let cap = 5;
    let mut roots: Vec<(String, pnbisim::PtNet, pnbisim::Multiset)> = marked_nets();
    for r in rows {
        roots.push((r.case.name.clone(), r.case.net.clone(), r.case.m1.clone()));
        roots.push((r.case.name.clone(), r.case.net.clone(), r.case.m2.clone()));
    }
    let mut states = [0usize; 2];
    for (name, net, m) in &roots {
        let h = net.reachable(m, cap).map_err(|e| format!("{name}: {e}"))?.bound;
        let k0 = IndexedMarking::initial(m);
        let im = reachable_im(net, &k0, cap).map_err(|e| format!("{name}: {e}"))?;
        let over = im.states.iter().flat_map(|k| k.tokens()).find(|t| t.index > h);
        ensure(over.is_none(), || format!("{name}: token {over:?} above bound {h}"))?;
        let oim = reachable_oim(net, &k0, cap).map_err(|e| format!("{name}: {e}"))?;
        let projected: BTreeSet<&IndexedMarking> = oim.states.iter().map(|o| &o.marking).collect();
        let direct: BTreeSet<&IndexedMarking> = im.states.iter().collect();
        ensure(projected == direct, || format!("{name}: OIM markings differ from IM"))?;
        states[0] += im.len();
        states[1] += oim.len();
    }
    Ok(format!(
        "{} marked nets, {} indexed and {} ordered markings",
        roots.len(),
        states[0],
        states[1]
    ))
}

fn evidence(rows: &[Row]) -> Check {
    let mut counts = [0; 2];
    for r in rows {
        let (net, m1, m2) = (&r.case.net, &r.case.m1, &r.case.m2);
        for v in [&r.fc, &r.cn] {
            match (v.outcome, &v.evidence) {
                (Outcome::Equivalent, Some(GameEvidence::Witness(w))) => {
                    validate_witness(net, m1, m2, w).map_err(|e| format!("{}: {e}", r.case.name))?;
                    counts[0] += 1;
                }
                (Outcome::NotEquivalent, Some(GameEvidence::Distinguishing(d))) => {
                    replay_distinguishing(net, m1, m2, d).map_err(|e| format!("{}: {e}", r.case.name))?;
                    counts[1] += 1;
                }
                (o, _) => return Err(format!("{}: outcome {o} without matching evidence", r.case.name)),
            }
        }
    }
    Ok(format!("{} witnesses validated, {} distinguishing plays replayed", counts[0], counts[1]))
}

fn report(n: usize, title: &str, result: Check, failed: &mut usize) {
    match result {
        Ok(detail) => println!("criterion {n} PASS  {title}: {detail}"),
        Err(why) => {
            *failed += 1;
            println!("criterion {n} FAIL  {title}: {why}");
        }
    }
}

fn main() {
    let mut failed = 0;
    report(1, "fc/cn golden check through the CLI", cli_golden(), &mut failed);
    report(2, "indexed marking golden values", indexed_golden(), &mut failed);
    report(3, "ordered step golden relation", ordered_golden(), &mut failed);
    report(4, "coherence of order and process", coherence(), &mut failed);
    let start = Instant::now();
    let rows = run_corpus(corpus());
    let elapsed = start.elapsed();
    report(5, "games agree with the process oracle", oracle_agreement(&rows, elapsed), &mut failed);
    report(6, "cn => fc => interleaving", hierarchy(&rows), &mut failed);
    report(7, "index ceiling and finite OIM spaces", finiteness(&rows), &mut failed);
    report(8, "evidence validates", evidence(&rows), &mut failed);
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
