//! Text renderings for the deterministic subcommands.

use std::fmt::Write as _;
use std::f64::consts::FRAC_1_SQRT_2;

use hqec::gates::{self, gate_audit, UnitSubstitution};
use hqec::hspace::UnitarityReport;
use hqec::register::{bell_prepare, bell_prepare_with, QRegister};
use hqec::stabilizer::{
    audit_against_paper, build_syndrome_table, full_action_table, paper_five_qubit_code, verify_codewords,
    BasisMapping, CodeId, CodewordReport, Sign, SyndromeTable, PAPER_TABLE2,
};
use hqec::{Basis, Quaternion};

const TOL: f64 = 1e-12;

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// `(±1/√2)u` when `a` is a real multiple of a unit `u`, otherwise the full
/// quaternion in parentheses.
fn amplitude_text(a: Quaternion) -> String {
    let parts = [a.w, a.x, a.y, a.z];
    let nonzero: Vec<usize> = (0..4).filter(|i| parts[*i].abs() > TOL).collect();
    if let [only] = nonzero[..] {
        let s = parts[only];
        let coeff = if (s.abs() - FRAC_1_SQRT_2).abs() < TOL {
            format!("{}1/√2", if s < 0.0 { "-" } else { "" })
        } else {
            hqec::experiments::format_g(s)
        };
        let unit = match Basis::ALL[only] {
            Basis::One => "",
            b => b.symbol(),
        };
        format!("({coeff}){unit}")
    } else {
        format!("({a})")
    }
}

fn ket_text(reg: &QRegister) -> String {
    let terms: Vec<String> = (0..reg.dim())
        .filter(|i| reg.amp(*i).norm_sq() > TOL * TOL)
        .map(|i| format!("{}|{:0width$b}>", amplitude_text(reg.amp(i)), i, width = reg.n()))
        .collect();
    terms.join(" + ")
}

fn unitarity_line(name: &str, r: &UnitarityReport) -> String {
    if r.pass {
        format!("{name} unitary (U U^dagger = I within {:e}): PASS", r.tol)
    } else {
        let (row, col) = r.worst_entry;
        format!(
            "{name} unitary (U U^dagger = I within {:e}): FAIL (max deviation {} at ({row},{col}), entry {})",
            r.tol,
            hqec::experiments::format_g(r.max_deviation),
            r.worst_value
        )
    }
}

pub fn bell() -> String {
    let mut s = String::new();
    let state = bell_prepare();
    let classical = bell_prepare_with(
        &gates::cnot_h().substitute_units(&UnitSubstitution::j_k_to_minus_i()).expect("unit substitution"),
    );
    writeln!(s, "CNOT_H (H_H x I)|00> = {}", ket_text(&state)).unwrap();
    writeln!(s, "amplitudes: {}", state.ket_string()).unwrap();
    writeln!(s, "with j = k = -i: {}", ket_text(&classical)).unwrap();
    writeln!(s, "{}", unitarity_line("H_H", &gates::hadamard_h().is_unitary(TOL))).unwrap();
    writeln!(s, "{}", unitarity_line("CNOT_H", &gates::cnot_h().is_unitary(TOL))).unwrap();
    s
}

struct Audits {
    hadamard: UnitarityReport,
    cnot: UnitarityReport,
    table2: hqec::stabilizer::AuditReport,
    codewords: Vec<CodewordReport>,
}

impl Audits {
    fn run() -> Audits {
        let table = build_syndrome_table(&paper_five_qubit_code(), &[]);
        Audits {
            hadamard: gates::hadamard_h().is_unitary(TOL),
            cnot: gates::cnot_h().is_unitary(TOL),
            table2: audit_against_paper(&table).expect("five-qubit table has 15 rows"),
            codewords: CodeId::ALL.iter().map(|c| verify_codewords(&c.build())).collect(),
        }
    }

    fn paper5_codewords(&self) -> &CodewordReport {
        self.codewords.iter().find(|r| r.code == CodeId::Paper5.as_str()).expect("paper5 report")
    }

    fn summary(&self) -> String {
        format!(
            "AUDIT hadamard_unitary={} cnot_unitary={} table2_mismatches={} codeword_check_paper5={}",
            verdict(self.hadamard.pass),
            verdict(self.cnot.pass),
            self.table2.mismatches,
            verdict(self.paper5_codewords().pass())
        )
    }
}

fn codeword_line(r: &CodewordReport) -> String {
    let failing = r.failing_generators();
    let detail = if failing.is_empty() {
        String::new()
    } else {
        let list: Vec<String> = failing.iter().map(|g| format!("S{g}")).collect();
        format!(" (generators not fixing both codewords: {})", list.join(","))
    };
    format!("codeword check {}: {}{detail}", r.code, verdict(r.pass()))
}

pub fn verify() -> String {
    let a = Audits::run();
    let mut s = String::new();
    writeln!(s, "{}", unitarity_line("H_H", &a.hadamard)).unwrap();
    writeln!(s, "{}", unitarity_line("CNOT_H", &a.cnot)).unwrap();
    writeln!(s, "table2 mismatches: {} ({})", a.table2.mismatches, a.table2.mismatched_labels().join(" ")).unwrap();
    for r in &a.codewords {
        writeln!(s, "{}", codeword_line(r)).unwrap();
    }
    writeln!(s, "{}", a.summary()).unwrap();
    s
}

fn sign_text(s: Option<Sign>) -> String {
    s.map_or_else(|| "not an eigenvector".to_string(), |v| v.to_string())
}

pub fn audit() -> String {
    let a = Audits::run();
    let mut s = String::new();
    writeln!(s, "== gate audit (tolerance {TOL:e})").unwrap();
    for g in gate_audit(TOL) {
        writeln!(
            s,
            "{:<7} side={:<5} unitary={} max_deviation={} phase_aligned={}",
            g.name,
            format!("{:?}", g.side).to_lowercase(),
            verdict(g.unitarity.pass),
            hqec::experiments::format_g(g.unitarity.max_deviation),
            g.phase_aligned
        )
        .unwrap();
    }
    let h = gates::hadamard_h();
    let product = h.matrix().matmul(&h.matrix().adjoint()).expect("square");
    writeln!(s, "H_H H_H^dagger = {}", serde_json::to_string(&product).expect("matrix json")).unwrap();
    writeln!(
        s,
        "H_H worked example: output taken as alpha|0> + beta|1> with the single 1/√2 inside alpha and beta; \
         the printed form (1/√2)(alpha|0> + beta|1>) would scale the state by an extra 1/√2"
    )
    .unwrap();

    writeln!(s, "\n== five-qubit syndrome table vs published table").unwrap();
    writeln!(s, "{:<6} {:<16} {:<16} status", "error", "computed", "published").unwrap();
    for r in &a.table2.rows {
        let status = if r.matches { "match" } else { "DIFF" };
        writeln!(s, "{:<6} {:<16} {:<16} {status}", r.quaternionic_label, r.computed.to_string(), r.paper.to_string())
            .unwrap();
    }
    for (label, groups) in [("computed", &a.table2.computed_collisions), ("published", &a.table2.paper_collisions)] {
        for (syn, errs) in groups {
            writeln!(s, "{label} collision {syn}: {}", errs.join(" ")).unwrap();
        }
    }

    writeln!(s, "\n== codeword verification").unwrap();
    for r in &a.codewords {
        writeln!(s, "{}", codeword_line(r)).unwrap();
        for (i, g) in r.generators.iter().enumerate() {
            writeln!(
                s,
                "  S{} = {}: |0_L> {}, |1_L> {}",
                i + 1,
                g.generator,
                sign_text(g.on_zero),
                sign_text(g.on_one)
            )
            .unwrap();
        }
        writeln!(
            s,
            "  Z_L|0_L> = |0_L>: {}, Z_L|1_L> = -|1_L>: {}, X_L swaps codewords: {}",
            verdict(r.logical_z_zero),
            verdict(r.logical_z_one),
            verdict(r.logical_x_swap)
        )
        .unwrap();
    }

    writeln!(s, "\n== codeword action tables (first q-qubit times i, j, k)").unwrap();
    for mapping in BasisMapping::presets() {
        let rows = full_action_table(&mapping);
        let diffs = rows.iter().filter(|r| !r.matches).count();
        writeln!(s, "mapping {}: {diffs} of {} entries differ from the printed table", mapping.name(), rows.len())
            .unwrap();
        for r in rows.iter().filter(|r| !r.matches) {
            writeln!(s, "  {} * {}: computed {}, printed {}", r.codeword, r.unit.symbol(), r.rendered, r.paper).unwrap();
        }
    }
    writeln!(s, "\n{}", a.summary()).unwrap();
    s
}

fn table(code: CodeId) -> SyndromeTable {
    build_syndrome_table(&code.build(), &[])
}

fn paper_match(code: CodeId, label: &str, values: &[i8]) -> Option<bool> {
    (code == CodeId::Paper5)
        .then(|| PAPER_TABLE2.iter().find(|(l, _)| *l == label).map(|(_, bits)| bits[..] == values[..]))
        .flatten()
}

/// Columns: error_label, phase (the X/Y/Z -> i/j/k phase), syndrome,
/// s1..sm, and matches_paper for the five-qubit code as printed.
pub fn syndrome_csv(code: CodeId) -> Result<String, csv::Error> {
    let t = table(code);
    let m = t.rows.first().map_or(0, |r| r.syndrome.len());
    let mut header = vec!["error_label".to_string(), "phase".into(), "syndrome".into()];
    header.extend((1..=m).map(|g| format!("s{g}")));
    if code == CodeId::Paper5 {
        header.push("matches_paper".into());
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for r in &t.rows {
        let values = r.syndrome.values();
        let mut rec = vec![r.label(), r.letter.table1_phase().to_string(), r.syndrome.to_string()];
        rec.extend(values.iter().map(|v| format!("{v:+}")));
        if let Some(m) = paper_match(code, &r.label(), &values) {
            rec.push(m.to_string());
        }
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("ascii csv"))
}

pub fn syndrome_text(code: CodeId) -> String {
    let t = table(code);
    let mut s = format!("syndrome table for {}\n", t.code);
    for r in &t.rows {
        let mark = match paper_match(code, &r.label(), &r.syndrome.values()) {
            Some(true) => "  matches published",
            Some(false) => "  differs from published",
            None => "",
        };
        writeln!(s, "{:<4} {:<4} {}{mark}", r.label(), r.quaternionic_label(), r.syndrome).unwrap();
    }
    s
}

pub fn report() -> String {
    let mut s = String::new();
    writeln!(s, "# hqec report\n\n## Bell circuit\n").unwrap();
    s.push_str(&bell());
    writeln!(s, "\n## Audits\n").unwrap();
    s.push_str(&audit());
    writeln!(s, "\n## Syndrome tables\n").unwrap();
    for code in CodeId::ALL {
        s.push_str(&syndrome_text(code));
        s.push('\n');
    }
    writeln!(s, "## Closed-form three-qubit bit-flip logical error rate\n").unwrap();
    for p in [0.01, 0.05, 0.1, 0.2] {
        writeln!(s, "p = {p}: p_L = {}", hqec::experiments::format_g(hqec::experiments::closed_form_three_qubit(p)))
            .unwrap();
    }
    s
}
