//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs without the libtest harness so the lines are always
//! printed.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use hqec::experiments::{
    closed_form_three_qubit, figure1_data, fit_threshold, log_space, run_sweep, scaling_model, SweepConfig,
};
use hqec::gates::{self, UnitSubstitution};
use hqec::noise::{apply_event, sample_error, undo_rotations, AngleDist, NoiseModel, RotationSlots};
use hqec::register::{bell_prepare, bell_prepare_with};
use hqec::stabilizer::{
    audit_against_paper, build_syndrome_table, eigen_sign, verify_codewords, CodeId, PauliString, Sign, Syndrome,
    UnitPhase, PAPER_TABLE2,
};
use hqec::{ImaginaryAxis, QRegister, QVector, Quaternion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Mismatch count between the computed five-qubit syndromes and the
/// published table, fixed once from the brute-force matrix oracle below.
const FROZEN_TABLE2_MISMATCHES: usize = 9;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
    Quaternion::new(w, x, y, z)
}

fn criterion_1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut draw = || q(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
    let start = Instant::now();
    let (mut assoc, mut norm, mut conj) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let (a, b, c) = (draw(), draw(), draw());
        let s3 = (a.norm() * b.norm() * c.norm()).max(1.0);
        let s2 = (a.norm() * b.norm()).max(1.0);
        assoc = assoc.max(((a * b) * c).dist(&(a * (b * c))) / s3);
        norm = norm.max(((a * b).norm() - a.norm() * b.norm()).abs() / s2);
        conj = conj.max((a * b).conj().dist(&(b.conj() * a.conj())) / s2);
    }
    let elapsed = start.elapsed();
    ensure(assoc <= 1e-12, || format!("associativity error {assoc:e}"))?;
    ensure(norm <= 1e-12, || format!("norm multiplicativity error {norm:e}"))?;
    ensure(conj <= 1e-12, || format!("conjugate anti-homomorphism error {conj:e}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("10^4 triples, max relative errors {assoc:.1e}/{norm:.1e}/{conj:.1e}, {elapsed:?}"))
}

fn close(a: Quaternion, b: Quaternion, what: &str) -> Result<(), String> {
    ensure(a.dist(&b) <= 1e-12, || format!("{what}: got {a}, expected {b}"))
}

fn criterion_2() -> Check {
    let h = gates::hadamard_h();
    ensure(h.side() == hqec::MulSide::Left, || "H_H must act from the left".into())?;
    for (w, x, y, z) in [(0.3, -0.7, 1.1, 0.4), (1.0, 0.0, 0.0, 0.0), (-0.2, 0.9, 0.1, -1.3)] {
        let psi = QVector::new(vec![Quaternion::real(w), q(0.0, x, y, z)]).unwrap();
        let out = h.matrix().matvec(&psi, h.side()).unwrap();
        // alpha = (w - x + y k - z j)/sqrt2, beta = ((w - x) i - y j - z k)/sqrt2
        close(out.amps()[0], q(w - x, 0.0, -z, y).scale(FRAC_1_SQRT_2), "H_H alpha")?;
        close(out.amps()[1], q(0.0, w - x, -y, -z).scale(FRAC_1_SQRT_2), "H_H beta")?;
    }

    let cnot = gates::cnot_h();
    ensure(cnot.side() == hqec::MulSide::Right, || "CNOT_H must act from the right".into())?;
    let (w, x, y, z) = (0.2, 0.5, -0.3, 0.8);
    let psi = QVector::new(vec![Quaternion::real(w), Quaternion::ZERO, q(0.0, x, y, z), Quaternion::ZERO]).unwrap();
    let out = cnot.matrix().matvec(&psi, cnot.side()).unwrap();
    close(out.amps()[0], Quaternion::real(w), "CNOT_H alpha")?;
    // beta = y i - x j - z
    close(out.amps()[3], q(-z, y, -x, 0.0), "CNOT_H beta")?;

    let (a, b, c, d) = (0.4, -0.1, 0.7, 0.3);
    let control = QRegister::new(1, QVector::new(vec![q(a, b, 0.0, 0.0), q(c, 0.0, d, 0.0)]).unwrap()).unwrap();
    let reg = control.tensor(&QRegister::from_bits("0").unwrap()).apply_gate(&cnot, &[1, 2]).unwrap();
    close(reg.amp(0), q(a, b, 0.0, 0.0), "CNOT_H |00>")?;
    // d i + c k
    close(reg.amp(3), q(0.0, d, 0.0, c), "CNOT_H |11>")?;
    close(reg.amp(1), Quaternion::ZERO, "CNOT_H |01>")?;
    close(reg.amp(2), Quaternion::ZERO, "CNOT_H |10>")?;

    let bell = bell_prepare();
    close(bell.amp(0), Quaternion::real(FRAC_1_SQRT_2), "Bell |00>")?;
    close(bell.amp(3), q(0.0, 0.0, -FRAC_1_SQRT_2, 0.0), "Bell |11>")?;
    let sub = gates::cnot_h().substitute_units(&UnitSubstitution::j_k_to_minus_i()).unwrap();
    let classical = bell_prepare_with(&sub);
    close(classical.amp(0), Quaternion::real(FRAC_1_SQRT_2), "substituted Bell |00>")?;
    close(classical.amp(3), Quaternion::real(FRAC_1_SQRT_2), "substituted Bell |11>")?;
    for i in [1, 2] {
        close(bell.amp(i), Quaternion::ZERO, "Bell middle")?;
        close(classical.amp(i), Quaternion::ZERO, "substituted Bell middle")?;
    }
    Ok(format!("H_H, CNOT_H, Bell (1/√2)(|00> - j|11>) and j=k=-i substitution reproduced; Bell = {}", bell.ket_string()))
}

fn criterion_3() -> Check {
    let cnot = gates::cnot_h().is_unitary(1e-12);
    ensure(cnot.pass && cnot.max_deviation <= 1e-12, || format!("CNOT_H deviation {}", cnot.max_deviation))?;
    let h = gates::hadamard_h().is_unitary(1e-12);
    let (r, c) = h.worst_entry;
    ensure(!h.pass, || "H_H unexpectedly unitary".into())?;
    ensure(r != c, || format!("worst entry ({r},{c}) is diagonal"))?;
    ensure((h.max_deviation - 1.0).abs() <= 1e-12, || format!("H_H deviation {}", h.max_deviation))?;
    ensure(h.worst_value.dist(&-Quaternion::I) <= 1e-12, || format!("H_H worst entry {}", h.worst_value))?;
    ensure(h == gates::hadamard_h().is_unitary(1e-12), || "H_H report differs between runs".into())?;
    ensure(gates::gate_audit(1e-12) == gates::gate_audit(1e-12), || "gate audit differs between runs".into())?;
    // independent oracle: direct 2x2 products
    let s = FRAC_1_SQRT_2;
    let m = [[Quaternion::real(s), Quaternion::I.scale(s)], [Quaternion::I.scale(s), Quaternion::real(-s)]];
    let off = m[0][0] * m[1][0].conj() + m[0][1] * m[1][1].conj();
    ensure(off.dist(&-Quaternion::I) <= 1e-12, || format!("oracle off-diagonal {off}"))?;
    Ok(format!("CNOT_H deviation {:.1e}; H_H deviation {} at ({r},{c}) = {}", cnot.max_deviation, h.max_deviation, h.worst_value))
}

fn criterion_4() -> Check {
    let mut checked = 0;
    for id in [CodeId::Three, CodeId::Perfect5] {
        let code = id.build();
        for e in code.single_qubit_errors() {
            let algebraic = code.syndrome_of(&e).unwrap();
            for phase in UnitPhase::all() {
                let phased = e.clone().with_phase(phase);
                ensure(code.syndrome_of(&phased).unwrap() == algebraic, || format!("{id}: phase {phase} changes syndrome of {e}"))?;
                for cw in code.codewords() {
                    let state = phased.apply(cw).unwrap();
                    let measured: Option<Vec<Sign>> =
                        code.generators().iter().map(|g| eigen_sign(g, &state).unwrap()).collect();
                    ensure(measured.as_deref() == Some(algebraic.bits()), || {
                        format!("{id}: {phased} measured {measured:?}, commutation {algebraic}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (error, phase, codeword) cases agree"))
}

/// Brute-force oracle: `E` anticommutes with `S` iff `E S = -S E` as dense
/// matrices.
fn matrix_syndrome(e: &PauliString, gens: &[PauliString]) -> Syndrome {
    let em = e.matrix();
    Syndrome(
        gens.iter()
            .map(|g| {
                let gm = g.matrix();
                let es = em.matmul(&gm).unwrap();
                let se = gm.matmul(&em).unwrap();
                if es.approx_eq(&se, 1e-12) {
                    Sign::Plus
                } else {
                    assert!(es.approx_eq(&se.scale(-1.0), 1e-12));
                    Sign::Minus
                }
            })
            .collect(),
    )
}

fn criterion_5() -> Check {
    let code = CodeId::Paper5.build();
    let table = build_syndrome_table(&code, &[]);
    let report = audit_against_paper(&table).map_err(|e| e.to_string())?;
    ensure(report == audit_against_paper(&build_syndrome_table(&code, &[])).unwrap(), || "audit not reproducible".into())?;

    let mut oracle_mismatches = 0;
    for e in code.single_qubit_errors() {
        let label = e.label();
        let expected = matrix_syndrome(&e, code.generators());
        let (_, printed) = PAPER_TABLE2.iter().find(|(l, _)| *l == label).unwrap();
        if expected.values() != printed {
            oracle_mismatches += 1;
        }
        let row = report.rows.iter().find(|r| r.label == label).unwrap();
        ensure(row.computed == expected, || format!("{label}: library {} vs oracle {expected}", row.computed))?;
    }
    ensure(oracle_mismatches == FROZEN_TABLE2_MISMATCHES, || format!("oracle finds {oracle_mismatches} mismatches"))?;
    ensure(report.mismatches == FROZEN_TABLE2_MISMATCHES, || format!("library finds {} mismatches", report.mismatches))?;
    let row = |l: &str| report.rows.iter().find(|r| r.label == l).unwrap();
    ensure(row("X1").computed.values() == [1, -1, 1, 1] && !row("X1").matches, || "X1 row".into())?;
    ensure(row("Z5").computed.values() == [1, 1, 1, 1] && !row("Z5").matches, || "Z5 row".into())?;
    Ok(format!("{} mismatches ({}); X1 = {}, Z5 = {}", report.mismatches, report.mismatched_labels().join(" "), row("X1").computed, row("Z5").computed))
}

fn criterion_6() -> Check {
    for id in [CodeId::Three, CodeId::Perfect5] {
        let r = verify_codewords(&id.build());
        ensure(r.pass(), || format!("{id} codewords fail generators {:?}", r.failing_generators()))?;
    }
    let paper = verify_codewords(&CodeId::Paper5.build());
    ensure(!paper.pass() && paper.failing_generators().contains(&1), || "paper5 S1 failure not recorded".into())?;
    Ok(format!("three and perfect5 pass; paper5 fails generators {:?}", paper.failing_generators()))
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let cfg = SweepConfig::new(CodeId::Three, NoiseModel::bit_flip(0.0).unwrap(), vec![0.01, 0.05, 0.1, 0.2], 100_000, 7);
    let res = run_sweep(&cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut worst = 0.0f64;
    for r in &res.rows {
        let exact = closed_form_three_qubit(r.p);
        let z = (r.p_l - exact).abs() / r.stderr;
        worst = worst.max(z);
        ensure(z <= 3.0, || format!("p = {}: p_L {} vs {exact} ({z:.2} stderr)", r.p, r.p_l))?;
    }
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("4 points x 10^5 trials, worst deviation {worst:.2} stderr, {elapsed:?}"))
}

fn criterion_8() -> Check {
    let grid = log_space(1e-3, 3e-2, 8);
    let cfg = SweepConfig::new(CodeId::Perfect5, NoiseModel::depolarizing(0.0).unwrap(), grid.clone(), 4_000_000, 8);
    let res = run_sweep(&cfg).map_err(|e| e.to_string())?;
    let fit = res.fit().map_err(|e| e.to_string())?;
    ensure((fit.slope - 2.0).abs() <= 0.15, || format!("slope {}", fit.slope))?;
    for w in res.rows.windows(2) {
        let slack = 3.0 * (w[0].stderr.powi(2) + w[1].stderr.powi(2)).sqrt();
        ensure(w[1].p_l + slack >= w[0].p_l, || format!("p_L decreases between p = {} and {}", w[0].p, w[1].p))?;
    }

    let pts: Vec<_> = log_space(1e-3, 1e-2, 8).into_iter().map(|p| (p, scaling_model(p, 0.015, 3))).collect();
    let synth = fit_threshold(&pts).map_err(|e| e.to_string())?;
    ensure((synth.p_th_intercept - 0.015).abs() <= 0.05 * 0.015, || format!("synthetic p_th {}", synth.p_th_intercept))?;
    ensure((synth.slope - 2.0).abs() <= 0.002, || format!("synthetic slope {}", synth.slope))?;

    let noise = NoiseModel::depolarizing(0.0)
        .unwrap()
        .with_rotations(0.05, ImaginaryAxis::K, AngleDist::UniformMax(FRAC_PI_2))
        .unwrap();
    let standard = SweepConfig::new(CodeId::Perfect5, noise, grid, 100_000, 9);
    let quaternionic = SweepConfig { quaternionic_detection: true, ..standard.clone() };
    let fig = figure1_data(&standard, &quaternionic).map_err(|e| e.to_string())?;
    let mut strict = 0;
    for (s, qr) in fig.standard.rows.iter().zip(&fig.quaternionic.rows) {
        ensure(qr.p_l <= s.p_l, || format!("p = {}: quaternionic {} > standard {}", s.p, qr.p_l, s.p_l))?;
        strict += usize::from(qr.p_l < s.p_l);
    }
    ensure(strict >= 1, || "no point with strict improvement".into())?;
    Ok(format!(
        "perfect5 slope {:.3} (4e6 trials/point); synthetic p_th {:.5} slope {:.5}; quaternionic < standard at {strict}/8 points",
        fit.slope, synth.p_th_intercept, synth.slope
    ))
}

fn run_cli(args: &[&str], threads: &str, dir: &Path) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hqec"))
        .args(args)
        .env("HQEC_THREADS", threads)
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("`hqec {}` exited with {}", args.join(" "), out.status))?;
    Ok(out.stdout)
}

fn criterion_9() -> Check {
    let root: PathBuf = std::env::temp_dir().join(format!("hqec-acceptance-{}", std::process::id()));
    let commands: Vec<(Vec<&str>, Vec<&str>)> = vec![
        (vec!["bell"], vec![]),
        (vec!["verify"], vec![]),
        (vec!["audit"], vec![]),
        (vec!["report"], vec![]),
        (vec!["syndrome-table", "--code", "paper5"], vec![]),
        (
            vec!["mc", "--code", "perfect5", "--p", "0.001:0.1:log:6", "--trials", "20000", "--seed", "3", "--p-rot", "0.05", "--rot-angle-max", "1.5", "--quaternionic", "--out", "mc.csv"],
            vec!["mc.csv"],
        ),
        (vec!["mc", "--code", "three", "--p", "0.05,0.1", "--weights", "1,0,0", "--trials", "50000"], vec![]),
        (vec!["fit", "--in", "mc.csv", "--out", "fit.json"], vec!["fit.json"]),
        (
            vec!["figure1", "--out", "fig", "--trials", "5000", "--seed", "4"],
            vec!["fig.csv", "fig_standard.csv", "fig_quaternionic.csv", "fig_fit.json"],
        ),
    ];
    let mut baseline: Vec<Vec<u8>> = Vec::new();
    for (t, threads) in ["1", "2", "4", "0"].iter().enumerate() {
        let dir = root.join(format!("t{threads}"));
        std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
        let mut outputs = Vec::new();
        for (args, files) in &commands {
            outputs.push(run_cli(args, threads, &dir)?);
            for f in files {
                outputs.push(std::fs::read(dir.join(f)).map_err(|e| format!("{f}: {e}"))?);
            }
        }
        if t == 0 {
            baseline = outputs;
        } else {
            ensure(outputs == baseline, || format!("output differs with HQEC_THREADS={threads}"))?;
        }
    }
    let _ = std::fs::remove_dir_all(&root);
    Ok(format!("{} outputs byte-identical for HQEC_THREADS in {{1, 2, 4, 0}}", baseline.len()))
}

fn criterion_10() -> Check {
    let mut events = 0;
    let mut worst_norm = 0.0f64;
    let mut worst_restore = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for id in CodeId::ALL {
        let code = id.build();
        let n = code.n();
        for slots in [RotationSlots::Zero, RotationSlots::All] {
            let model = NoiseModel::depolarizing(0.0)
                .unwrap()
                .with_rotations(0.5, ImaginaryAxis::normalize(0.0, 1.0, 1.0).unwrap(), AngleDist::UniformMax(3.0))
                .unwrap()
                .with_rotation_slots(slots);
            for trial in 0..200 {
                let e = sample_error(&model, n, 10, trial);
                ensure(code.syndrome_of(&e.pauli).unwrap().is_trivial(), || format!("{id}: rotations-only event has a Pauli part"))?;
                let random = QRegister::normalize(
                    n,
                    QVector::new((0..1 << n).map(|_| q(rng.random(), rng.random(), rng.random(), rng.random())).collect()).unwrap(),
                )
                .unwrap();
                for state in code.codewords().iter().chain([&random]) {
                    let rotated = apply_event(state, &e).unwrap();
                    worst_norm = worst_norm.max((rotated.norm_sq() - state.norm_sq()).abs());
                    let back = undo_rotations(&rotated, &e).unwrap();
                    worst_restore = worst_restore.max(back.amps().max_dist(state.amps()).unwrap());
                }
                // measured generator signs on the rotated codewords
                let zero_slot_superposition = slots == RotationSlots::Zero && id == CodeId::Perfect5;
                if !zero_slot_superposition {
                    for cw in code.codewords() {
                        let rotated = apply_event(cw, &e).unwrap();
                        for g in code.generators() {
                            let before = eigen_sign(g, cw).unwrap();
                            let after = eigen_sign(g, &rotated).unwrap();
                            ensure(after == before, || format!("{id}: rotation changes measured sign of {g}"))?;
                            if id != CodeId::Paper5 {
                                ensure(after == Some(Sign::Plus), || format!("{id}: {g} not +1 after rotation"))?;
                            }
                        }
                    }
                }
                events += 1;
            }
        }
    }
    ensure(worst_norm <= 1e-10, || format!("norm drift {worst_norm:e}"))?;
    ensure(worst_restore <= 1e-10, || format!("restore error {worst_restore:e}"))?;
    Ok(format!(
        "{events} rotation events: syndromes trivial, norm drift {worst_norm:.1e}, restore error {worst_restore:.1e} \
         (measured signs checked for all codes with all-amplitude rotations and for three/paper5 with |0>-slot rotations)"
    ))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 10] = [
        ("algebra suite", criterion_1),
        ("worked examples", criterion_2),
        ("unitarity audit", criterion_3),
        ("syndrome oracle equivalence", criterion_4),
        ("five-qubit table audit regression", criterion_5),
        ("codeword audit", criterion_6),
        ("Monte Carlo vs closed form", criterion_7),
        ("exponent recovery and fit properties", criterion_8),
        ("CLI determinism", criterion_9),
        ("rotation-channel invariants", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(check).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match result {
            Ok(detail) => println!("criterion {} ({name}): PASS - {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL - {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
