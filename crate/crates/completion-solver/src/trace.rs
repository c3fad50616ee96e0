use std::fmt::Write;

/// One row of the iteration log. Row 0 describes the initial iterate.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    pub objective: f64,
    /// `||P_Omega(G - M)|| / ||P_Omega(M)||` for the newest reconstruction `G`.
    pub obs_residual: f64,
    pub ranks: [usize; 3],
    /// Wall time of the iteration in milliseconds.
    pub ms: f64,
    /// Some mode lost rank during this iteration.
    pub rank_decreased: bool,
    /// `||z+ - z||^2` over `C` and all factor tensors; NaN when ranks changed.
    pub step_sq: f64,
    /// `||P_Omega(C - M)||` right after the C-update.
    pub omega_block: f64,
}

impl TraceRow {
    pub const CSV_HEADER: &'static str = "iter,objective,obs_residual,r1,r2,r3,ms";

    pub fn csv_line(&self) -> String {
        format!(
            "{},{:e},{:e},{},{},{},{:.3}",
            self.iter, self.objective, self.obs_residual, self.ranks[0], self.ranks[1], self.ranks[2], self.ms
        )
    }

    /// Same row with the timing column cleared, for reproducibility checks.
    pub fn untimed(&self) -> TraceRow {
        TraceRow { ms: 0.0, ..self.clone() }
    }
}

pub fn trace_csv(rows: &[TraceRow]) -> String {
    let mut s = String::from(TraceRow::CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(s, "{}", r.csv_line());
    }
    s
}
