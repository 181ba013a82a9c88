//! Run records and their CSV form.
//!
//! CSV column sets are fixed; new columns are only ever appended.

use std::fmt::Write as _;

use crate::geometry::Vec2;

#[derive(Clone, Debug, PartialEq)]
pub struct RefinementRecord {
    pub propagation_step: usize,
    pub step: usize,
    pub n_elements: usize,
    pub n_dofs: usize,
    pub eta: f64,
    pub e_l2: Option<f64>,
    pub e_h1: Option<f64>,
    pub e_spr: Option<f64>,
    /// Elements marked after this solve (0 on the last step).
    pub marked: usize,
    pub hanging_nodes: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropagationRecord {
    pub step: usize,
    pub tip: Vec2,
    pub k1: f64,
    pub k2: f64,
    pub theta: f64,
    pub k_eq: f64,
    pub r_out_factor: f64,
    pub n_dofs: usize,
    pub eta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRecord {
    pub family: String,
    pub level: usize,
    pub h: f64,
    pub n_dofs: usize,
    pub e_l2: Option<f64>,
    pub e_h1: Option<f64>,
    pub e_spr: Option<f64>,
    pub eta: f64,
}

/// Least-squares log-log slopes against h, per mesh family.
#[derive(Clone, Debug, PartialEq)]
pub struct Slopes {
    pub family: String,
    pub e_l2: Option<f64>,
    pub e_h1: Option<f64>,
    pub e_spr: Option<f64>,
    pub eta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub beta_deg: f64,
    pub alpha: f64,
    pub k1: f64,
    pub k1_exact: f64,
    pub k2: f64,
    pub k2_exact: f64,
    pub theta: f64,
    pub n_dofs: usize,
}

impl TableRow {
    /// Ratio to the exact value, absent when the exact value vanishes.
    pub fn ratio(num: f64, exact: f64) -> Option<f64> {
        (exact.abs() > 1e-9 * (num.abs() + exact.abs()).max(1e-300)).then(|| num / exact)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Termination {
    Converged,
    RefinementCap,
    MaxSteps,
    ReachedBoundary { point: Vec2, tag: u32 },
    Completed,
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Termination::Converged => f.write_str("converged"),
            Termination::RefinementCap => f.write_str("refinement cap reached"),
            Termination::MaxSteps => f.write_str("max steps reached"),
            Termination::ReachedBoundary { point, tag } => write!(f, "crack reached boundary (tag {tag}) at ({}, {})", point.x, point.y),
            Termination::Completed => f.write_str("completed"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub problem: String,
    pub refinement: Vec<RefinementRecord>,
    pub propagation: Vec<PropagationRecord>,
    pub convergence: Vec<ConvergenceRecord>,
    pub slopes: Vec<Slopes>,
    pub table: Vec<TableRow>,
    pub crack_path: Vec<Vec2>,
    pub status: Termination,
}

impl RunReport {
    pub fn new(problem: &str) -> RunReport {
        RunReport {
            problem: problem.to_string(),
            refinement: vec![],
            propagation: vec![],
            convergence: vec![],
            slopes: vec![],
            table: vec![],
            crack_path: vec![],
            status: Termination::Completed,
        }
    }

    pub fn slopes_for(&self, family: &str) -> Option<&Slopes> {
        self.slopes.iter().find(|s| s.family == family)
    }

    pub fn refinement_csv(&self) -> String {
        let mut s = String::from("propagation_step,step,n_elements,n_dofs,eta,e_l2,e_h1,e_spr,marked,hanging_nodes\n");
        for r in &self.refinement {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{}",
                r.propagation_step,
                r.step,
                r.n_elements,
                r.n_dofs,
                r.eta,
                opt(r.e_l2),
                opt(r.e_h1),
                opt(r.e_spr),
                r.marked,
                r.hanging_nodes
            );
        }
        s
    }

    pub fn sif_history_csv(&self) -> String {
        let mut s = String::from("step,tip_x,tip_y,k1,k2,theta,k_eq,r_out_factor,n_dofs,eta\n");
        for r in &self.propagation {
            let _ = writeln!(s, "{},{},{},{},{},{},{},{},{},{}", r.step, r.tip.x, r.tip.y, r.k1, r.k2, r.theta, r.k_eq, r.r_out_factor, r.n_dofs, r.eta);
        }
        s
    }

    pub fn convergence_csv(&self) -> String {
        let mut s = String::from("family,level,h,n_dofs,e_l2,e_h1,e_spr,eta\n");
        for r in &self.convergence {
            let _ = writeln!(s, "{},{},{},{},{},{},{},{}", r.family, r.level, r.h, r.n_dofs, opt(r.e_l2), opt(r.e_h1), opt(r.e_spr), r.eta);
        }
        if !self.slopes.is_empty() {
            s.push_str("# slopes: family,e_l2,e_h1,e_spr,eta\n");
            for sl in &self.slopes {
                let _ = writeln!(s, "# {},{},{},{},{}", sl.family, opt(sl.e_l2), opt(sl.e_h1), opt(sl.e_spr), opt(sl.eta));
            }
        }
        s
    }

    /// Columns mirror the published slanted-crack table.
    pub fn table_csv(&self) -> String {
        let mut s = String::from("beta,alpha,k1,k1_exact,k1_ratio,k2,k2_exact,k2_ratio,theta,n_dofs\n");
        for r in &self.table {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{}",
                r.beta_deg,
                r.alpha,
                r.k1,
                r.k1_exact,
                opt(TableRow::ratio(r.k1, r.k1_exact)),
                r.k2,
                r.k2_exact,
                opt(TableRow::ratio(r.k2, r.k2_exact)),
                r.theta,
                r.n_dofs
            );
        }
        s
    }

    pub fn crack_path_csv(&self) -> String {
        let mut s = String::from("index,x,y\n");
        for (i, p) in self.crack_path.iter().enumerate() {
            let _ = writeln!(s, "{i},{},{}", p.x, p.y);
        }
        s
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Least-squares slope of log(y) against log(x); absent with fewer than two
/// usable points.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x.iter().zip(y).filter(|(a, b)| **a > 0.0 && **b > 0.0).map(|(a, b)| (a.ln(), b.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let h = [1.0, 0.5, 0.25, 0.125];
        let e: Vec<f64> = h.iter().map(|x: &f64| 3.0 * x.powf(1.7)).collect();
        assert!((loglog_slope(&h, &e).unwrap() - 1.7).abs() < 1e-12);
        assert_eq!(loglog_slope(&[1.0], &[2.0]), None);
        assert_eq!(loglog_slope(&[1.0, 1.0], &[2.0, 3.0]), None);
    }

    #[test]
    fn csv_headers_are_stable() {
        let r = RunReport::new("x");
        assert!(r.sif_history_csv().starts_with("step,tip_x,tip_y,k1,k2,theta,k_eq,"));
        assert!(r.table_csv().starts_with("beta,alpha,k1,k1_exact,k1_ratio,k2,k2_exact,k2_ratio,"));
        assert_eq!(r.crack_path_csv(), "index,x,y\n");
    }

    #[test]
    fn ratio_absent_for_zero_exact() {
        assert_eq!(TableRow::ratio(12.0, 0.0), None);
        assert_eq!(TableRow::ratio(2.0, 4.0), Some(0.5));
    }
}
