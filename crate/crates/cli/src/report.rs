//! Structured result documents and their renderings. JSON is canonical;
//! CSV is a flattened projection of the tabular fields; human is a
//! readable summary.

use serde::Serialize;

/// One invariant value, tagged with the method that produced it.
#[derive(Serialize)]
pub struct ValueEntry {
    pub method: &'static str,
    pub order: usize,
    /// Complex value as `[re, im]`.
    pub value: [f64; 2],
    pub tolerance: f64,
}

/// Pairwise disagreement between two methods.
#[derive(Serialize)]
pub struct ResidualEntry {
    pub between: [&'static str; 2],
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// One verification check.
#[derive(Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Sampled or exact estimation block.
#[derive(Serialize)]
pub struct EstimateBlock {
    pub p_minus: f64,
    pub p_minus_i: f64,
    /// Complex estimate as `[re, im]`.
    pub value: [f64; 2],
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub shots_x: u64,
    pub shots_y: u64,
    pub exact: bool,
}

#[derive(Serialize)]
pub struct QueryEntry {
    pub forward: u32,
    pub inverse: u32,
    pub expanded: u32,
}

/// Query accounting and fidelity for the switch simulation.
#[derive(Serialize)]
pub struct SimulationBlock {
    pub max_deviation: f64,
    pub tolerance: f64,
    pub queries_a: QueryEntry,
    pub queries_b: QueryEntry,
}

/// A permutation in both interchange notations.
#[derive(Serialize)]
pub struct PermEntry {
    pub label: String,
    pub one_line: Vec<usize>,
    pub cycles: String,
    pub parity: &'static str,
}

#[derive(Serialize)]
pub struct NogoBlock {
    pub n: usize,
    pub local_dim: usize,
    pub cycle_parity_odd: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhaustive_triples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhaustive_solutions: Option<usize>,
    pub trials: usize,
    pub max_det_deviation: f64,
    pub cycle_det_sign: i32,
    pub determinant_obstruction_vanishes: bool,
}

/// The full result document for one command invocation.
#[derive(Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    /// Unix seconds; omitted under `--deterministic`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<ValueEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<ResidualEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<EstimateBlock>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationBlock>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub permutations: Vec<PermEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nogo: Option<NogoBlock>,
}

impl Report {
    pub fn new(command: &'static str, deterministic: bool) -> Self {
        Report {
            tool: "qswitch",
            version: env!("CARGO_PKG_VERSION"),
            command,
            timestamp: if deterministic {
                None
            } else {
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .ok()
                    .map(|d| d.as_secs())
            },
            seed: None,
            values: Vec::new(),
            residuals: Vec::new(),
            estimate: None,
            checks: Vec::new(),
            simulation: None,
            permutations: Vec::new(),
            nogo: None,
        }
    }

    /// True iff every residual and check in the report passed.
    pub fn all_pass(&self) -> bool {
        self.residuals.iter().all(|r| r.pass) && self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("section,name,re,im,residual,pass\n");
        let fmt = |x: f64| format!("{x:.17e}");
        for v in &self.values {
            out.push_str(&format!(
                "value,{},{},{},,\n",
                v.method,
                fmt(v.value[0]),
                fmt(v.value[1])
            ));
        }
        for r in &self.residuals {
            out.push_str(&format!(
                "residual,{}|{},,,{},{}\n",
                r.between[0],
                r.between[1],
                fmt(r.residual),
                r.pass
            ));
        }
        if let Some(e) = &self.estimate {
            out.push_str(&format!(
                "estimate,value,{},{},,\n",
                fmt(e.value[0]),
                fmt(e.value[1])
            ));
            out.push_str(&format!(
                "estimate,stderr,{},{},,\n",
                fmt(e.stderr_re),
                fmt(e.stderr_im)
            ));
        }
        for c in &self.checks {
            out.push_str(&format!(
                "check,{},,,{},{}\n",
                c.name.replace(',', ";"),
                c.residual.map(fmt).unwrap_or_default(),
                c.pass
            ));
        }
        for p in &self.permutations {
            out.push_str(&format!(
                "perm,{},,,,{}\n",
                p.label.replace(',', ";"),
                p.parity
            ));
        }
        out
    }

    pub fn to_human(&self) -> String {
        let mut out = format!("{} {} — {}\n", self.tool, self.version, self.command);
        for v in &self.values {
            out.push_str(&format!(
                "  {:<18} order {:>2}   {:+.12} {:+.12}i\n",
                v.method, v.order, v.value[0], v.value[1]
            ));
        }
        for r in &self.residuals {
            out.push_str(&format!(
                "  |{} - {}| = {:.3e}  (tol {:.1e})  {}\n",
                r.between[0],
                r.between[1],
                r.residual,
                r.tolerance,
                if r.pass { "ok" } else { "FAIL" }
            ));
        }
        if let Some(e) = &self.estimate {
            out.push_str(&format!(
                "  estimate {:+.8} {:+.8}i  (stderr {:.2e}, {:.2e}; shots {}+{}{})\n",
                e.value[0],
                e.value[1],
                e.stderr_re,
                e.stderr_im,
                e.shots_x,
                e.shots_y,
                if e.exact { "; exact" } else { "" }
            ));
        }
        for c in &self.checks {
            out.push_str(&format!(
                "  [{}] {}{}{}\n",
                if c.pass { "pass" } else { "FAIL" },
                c.name,
                c.residual
                    .map(|r| format!("  residual {r:.3e}"))
                    .unwrap_or_default(),
                c.detail.as_deref().map(|d| format!("  ({d})")).unwrap_or_default()
            ));
        }
        if let Some(s) = &self.simulation {
            out.push_str(&format!(
                "  max deviation {:.3e} (tol {:.1e})\n  queries: A {}f+{}i (expanded {}), B {}f+{}i (expanded {})\n",
                s.max_deviation,
                s.tolerance,
                s.queries_a.forward,
                s.queries_a.inverse,
                s.queries_a.expanded,
                s.queries_b.forward,
                s.queries_b.inverse,
                s.queries_b.expanded
            ));
        }
        for p in &self.permutations {
            out.push_str(&format!(
                "  {:<12} {:?}  {}  parity {}\n",
                p.label, p.one_line, p.cycles, p.parity
            ));
        }
        if let Some(n) = &self.nogo {
            out.push_str(&format!(
                "  no-go witness n={} d={}: parity {}, exhaustive {}, det sign {}, max RHS det deviation {:.2e}{}\n",
                n.n,
                n.local_dim,
                if n.cycle_parity_odd { "odd" } else { "even" },
                match (n.exhaustive_triples, n.exhaustive_solutions) {
                    (Some(t), Some(s)) => format!("{s} solutions / {t} triples"),
                    _ => "skipped".into(),
                },
                n.cycle_det_sign,
                n.max_det_deviation,
                if n.determinant_obstruction_vanishes {
                    "; determinant obstruction vanishes at this (n, d)"
                } else {
                    ""
                }
            ));
        }
        out
    }

    pub fn render(&self, format: crate::Format) -> String {
        match format {
            crate::Format::Json => self.to_json(),
            crate::Format::Csv => self.to_csv(),
            crate::Format::Human => self.to_human(),
        }
    }
}
