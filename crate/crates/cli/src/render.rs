//! Report rendering. The station table mirrors the reference layout:
//! columns x, Re_theta, alpha, A, beta, B, ln_Re1, ln_Re2, ln_Re_Lambda,
//! Delta_pct in that order, fitted parameters to 3 significant figures,
//! logarithms to 2 decimals, the consistency spread to 1 decimal, and
//! absent quantities as "---".

use serde::Serialize;

use chevron::relation::{RelationFit, StationRecord};
use chevron::synth::GroundTruth;

use crate::records::{RecordsFile, RunConfig};

pub const ABSENT: &str = "---";

/// Three significant figures via decimal-count selection, so magnitudes
/// around 1 render like the reference tables (8.53, 0.143, 6430).
pub fn sig3(v: f64) -> String {
    if v == 0.0 {
        return "0.00".into();
    }
    let decimals = (2 - v.abs().log10().floor() as i32).clamp(0, 12) as usize;
    format!("{v:.decimals$}")
}

const STATION_COLUMNS: [&str; 10] = [
    "x", "Re_theta", "alpha", "A", "beta", "B", "ln_Re1", "ln_Re2", "ln_Re_Lambda", "Delta_pct",
];

fn station_row(r: &StationRecord) -> Vec<String> {
    let opt = |v: Option<String>| v.unwrap_or_else(|| ABSENT.into());
    let s2 = r.fit.segment2.as_ref();
    let sim = r.sim.as_ref();
    vec![
        format!("{:.2}", r.meta.x),
        opt(r.meta.re_theta.map(|v| format!("{v:.0}"))),
        sig3(r.fit.segment1.exponent),
        sig3(r.fit.segment1.coeff),
        opt(s2.map(|s| sig3(s.exponent))),
        opt(s2.map(|s| sig3(s.coeff))),
        opt(sim.map(|s| format!("{:.2}", s.ln_re1))),
        opt(sim.map(|s| format!("{:.2}", s.ln_re2))),
        opt(sim.map(|s| format!("{:.2}", s.ln_re_lambda))),
        opt(sim.map(|s| format!("{:.1}", s.delta_pct))),
    ]
}

/// Right-aligned fixed-width text table with a header line.
fn align_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = header
        .iter()
        .enumerate()
        .map(|(i, h)| rows.iter().map(|r| r[i].len()).chain([h.len()]).max().unwrap())
        .collect();
    let mut out = String::new();
    let emit = |out: &mut String, cells: Vec<&str>| {
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(&" ".repeat(widths[i] - cell.len()));
            out.push_str(cell);
        }
        out.push('\n');
    };
    emit(&mut out, header.to_vec());
    for row in rows {
        emit(&mut out, row.iter().map(|s| s.as_str()).collect());
    }
    out
}

pub fn render_station_table(records: &[StationRecord]) -> String {
    let rows: Vec<Vec<String>> = records.iter().map(station_row).collect();
    align_table(&STATION_COLUMNS, &rows)
}

/// Machine-readable twin of the table: full precision, station ids, and the
/// pressure parameter as trailing columns. Absent values are empty fields.
pub fn render_station_csv(records: &[StationRecord]) -> String {
    let mut out = String::from(
        "station_id,x,re_theta,alpha,A,beta,B,ln_re1,ln_re2,ln_re_lambda,delta_pct,P,dcp_dx\n",
    );
    for r in records {
        let s2 = r.fit.segment2.as_ref();
        let sim = r.sim.as_ref();
        let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        let fields = [
            r.meta.station_id.clone(),
            r.meta.x.to_string(),
            opt(r.meta.re_theta),
            r.fit.segment1.exponent.to_string(),
            r.fit.segment1.coeff.to_string(),
            opt(s2.map(|s| s.exponent)),
            opt(s2.map(|s| s.coeff)),
            opt(sim.map(|s| s.ln_re1)),
            opt(sim.map(|s| s.ln_re2)),
            opt(sim.map(|s| s.ln_re_lambda)),
            opt(sim.map(|s| s.delta_pct)),
            opt(r.p.as_ref().map(|p| p.p)),
            opt(r.p.as_ref().map(|p| p.dcp_dx)),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn render_station_json(config: &RunConfig, records: &[StationRecord]) -> String {
    let file = RecordsFile { config: config.clone(), records: records.to_vec() };
    let mut s = serde_json::to_string_pretty(&file).expect("records serialize");
    s.push('\n');
    s
}

/// Pressure cross-section block: Re_theta, P*10^3, ln_Re_Lambda for every
/// record carrying P. A purely favourable series is printed negated under
/// a -P*10^3 header so the column stays positive, the reference convention.
pub fn render_pressure_block(records: &[StationRecord]) -> Option<String> {
    let with_p: Vec<&StationRecord> = records.iter().filter(|r| r.p.is_some()).collect();
    if with_p.is_empty() {
        return None;
    }
    let ps: Vec<f64> = with_p.iter().map(|r| r.p.as_ref().unwrap().p).collect();
    let flip = ps.iter().all(|&p| p <= 0.0) && ps.iter().any(|&p| p < 0.0);
    let p_header = if flip { "-P*10^3" } else { "P*10^3" };
    let header = ["Re_theta", p_header, "ln_Re_Lambda"];
    let rows: Vec<Vec<String>> = with_p
        .iter()
        .zip(&ps)
        .map(|(r, &p)| {
            let shown = if flip { -p } else { p };
            vec![
                r.meta.re_theta.map(|v| format!("{v:.0}")).unwrap_or_else(|| ABSENT.into()),
                format!("{:.2}", shown * 1e3),
                r.sim
                    .as_ref()
                    .map(|s| format!("{:.2}", s.ln_re_lambda))
                    .unwrap_or_else(|| ABSENT.into()),
            ]
        })
        .collect();
    Some(align_table(&header, &rows))
}

#[derive(Debug, Serialize)]
pub struct RelationReport<'a> {
    pub config: &'a RunConfig,
    /// Acceptance band around the median ln Re_Lambda used for selection.
    pub selection_band: (f64, f64),
    pub selected_stations: usize,
    pub relation: &'a RelationFit,
}

pub fn render_relation_table(rep: &RelationReport) -> String {
    let f = rep.relation;
    let mut out = String::new();
    out.push_str(&format!(
        "B = {:.6} * (1/beta) + {:.6}   (r2 = {:.6})\n",
        f.slope, f.intercept, f.r2
    ));
    out.push_str(&format!(
        "selection band: ln_Re_Lambda in [{:.2}, {:.2}], {} stations selected\n",
        rep.selection_band.0, rep.selection_band.1, rep.selected_stations
    ));
    out.push_str(&format!(
        "fitted stations span ln_Re_Lambda [{:.2}, {:.2}]\n\n",
        f.ln_re_lambda_band.0, f.ln_re_lambda_band.1
    ));
    let header = ["station_id", "1/beta", "B", "predicted", "residual"];
    let rows: Vec<Vec<String>> = f
        .points
        .iter()
        .zip(&f.residuals)
        .map(|(p, res)| {
            vec![
                p.station_id.clone(),
                format!("{:.4}", p.inv_beta),
                format!("{:.4}", p.b),
                format!("{:.4}", f.predict(p.inv_beta)),
                format!("{res:+.4}"),
            ]
        })
        .collect();
    out.push_str(&align_table(&header, &rows));
    out
}

pub fn render_relation_csv(rep: &RelationReport) -> String {
    let f = rep.relation;
    let mut out = String::new();
    out.push_str(&format!("# slope = {}\n", f.slope));
    out.push_str(&format!("# intercept = {}\n", f.intercept));
    out.push_str(&format!("# r2 = {}\n", f.r2));
    out.push_str(&format!(
        "# selection_band = {},{}\n",
        rep.selection_band.0, rep.selection_band.1
    ));
    out.push_str(&format!(
        "# ln_re_lambda_band = {},{}\n",
        f.ln_re_lambda_band.0, f.ln_re_lambda_band.1
    ));
    out.push_str("station_id,inv_beta,B,predicted,residual\n");
    for (p, res) in f.points.iter().zip(&f.residuals) {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p.station_id,
            p.inv_beta,
            p.b,
            f.predict(p.inv_beta),
            res
        ));
    }
    out
}

pub fn render_relation_json(rep: &RelationReport) -> String {
    let mut s = serde_json::to_string_pretty(rep).expect("relation serialize");
    s.push('\n');
    s
}

#[derive(Debug, Serialize)]
pub struct SynthStation {
    pub station_id: String,
    pub file: String,
    pub seed: u64,
    pub truth: GroundTruth,
}

pub fn render_synth_table(stations: &[SynthStation]) -> String {
    let header = ["station_id", "seed", "A", "alpha", "B", "beta", "break_eta", "break_index"];
    let rows: Vec<Vec<String>> = stations
        .iter()
        .map(|s| {
            vec![
                s.station_id.clone(),
                s.seed.to_string(),
                format!("{:.6}", s.truth.a),
                format!("{:.6}", s.truth.alpha),
                format!("{:.6}", s.truth.b),
                format!("{:.6}", s.truth.beta),
                format!("{:.6}", s.truth.break_eta),
                s.truth.break_index.to_string(),
            ]
        })
        .collect();
    align_table(&header, &rows)
}

pub fn render_synth_csv(stations: &[SynthStation]) -> String {
    let mut out =
        String::from("station_id,file,seed,A,alpha,B,beta,break_eta,break_index\n");
    for s in stations {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            s.station_id,
            s.file,
            s.seed,
            s.truth.a,
            s.truth.alpha,
            s.truth.b,
            s.truth.beta,
            s.truth.break_eta,
            s.truth.break_index
        ));
    }
    out
}

pub fn render_synth_json(stations: &[SynthStation]) -> String {
    let mut s = serde_json::to_string_pretty(stations).expect("synth serialize");
    s.push('\n');
    s
}
