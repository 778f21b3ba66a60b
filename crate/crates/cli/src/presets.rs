//! Figure presets: fixed curve families written as one CSV plus a plot
//! script.

use ris_linklab::analytic::SepIntegrator;
use ris_linklab::schemes::Scheme;

use crate::error::{CliError, Result};
use crate::runs::{analytic_rows, simulated_rows, Series, SimBudget, SnrGrid};
use crate::table::{write_csv, Row};

pub const PRESETS: [&str; 5] = ["fig2", "fig3", "fig5", "fig6", "fig7"];

const INTELLIGENT_GRID: SnrGrid = SnrGrid {
    start_db: -60.0,
    stop_db: 0.0,
    step_db: 1.0,
};

const BLIND_GRID: SnrGrid = SnrGrid {
    start_db: -20.0,
    stop_db: 30.0,
    step_db: 2.0,
};

#[derive(Debug, Clone, PartialEq)]
pub struct PresetOptions {
    pub seed: u64,
    pub budget: SimBudget,
    pub nodes: usize,
    /// Replaces the preset's own SNR range.
    pub grid: Option<SnrGrid>,
}

impl Default for PresetOptions {
    fn default() -> Self {
        Self {
            seed: 1,
            budget: SimBudget {
                stop_on_zero_errors: true,
                ..SimBudget::default()
            },
            nodes: ris_linklab::quadrature::DEFAULT_NODES,
            grid: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureOutput {
    pub name: String,
    pub csv: String,
    pub plot_script: String,
}

impl FigureOutput {
    pub fn csv_file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    pub fn script_file_name(&self) -> String {
        format!("plot_{}.py", self.name)
    }
}

struct Layout {
    series: Vec<Series>,
    grid: SnrGrid,
    simulate: bool,
    bound: bool,
    title: &'static str,
    ylabel: &'static str,
}

fn series(schemes: &[Scheme], ns: &[usize], orders: &[usize]) -> Vec<Series> {
    let mut out = Vec::new();
    for &scheme in schemes {
        for &order in orders {
            for &n in ns {
                out.push(Series {
                    scheme,
                    n_reflectors: n,
                    order,
                });
            }
        }
    }
    out
}

fn layout(name: &str) -> Result<Layout> {
    use Scheme::*;
    let l = match name {
        "fig2" => Layout {
            series: series(&[DhIntelligent], &[16, 32], &[2]),
            grid: INTELLIGENT_GRID,
            simulate: false,
            bound: true,
            title: "Theoretical BEP, dual-hop intelligent surface",
            ylabel: "BEP",
        },
        "fig3" => Layout {
            series: series(&[DhIntelligent], &[8, 16, 32, 64, 128], &[2]),
            grid: INTELLIGENT_GRID,
            simulate: true,
            bound: false,
            title: "BPSK, varying number of reflectors",
            ylabel: "BER",
        },
        "fig5" => Layout {
            series: series(&[DhIntelligent, ApIntelligent], &[8, 16, 32, 64], &[2]),
            grid: INTELLIGENT_GRID,
            simulate: true,
            bound: false,
            title: "Dual-hop vs access point",
            ylabel: "BER",
        },
        "fig6" => Layout {
            series: series(&[DhIntelligent, ApIntelligent], &[64], &[4, 16, 64]),
            grid: INTELLIGENT_GRID,
            simulate: true,
            bound: false,
            title: "M-ary signalling, N = 64",
            ylabel: "SER",
        },
        "fig7" => Layout {
            series: series(&[DhBlind, ApBlind], &[4, 16, 64], &[2]),
            grid: BLIND_GRID,
            simulate: true,
            bound: false,
            title: "Blind transmission",
            ylabel: "BER",
        },
        other => return Err(CliError::UnknownPreset(other.to_string())),
    };
    Ok(l)
}

/// Seed of the `index`-th series of a preset.
pub fn series_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs preset `name`; the output depends only on `name` and `options`
/// (never on the worker count).
pub fn run_figure_preset(name: &str, options: &PresetOptions) -> Result<FigureOutput> {
    let layout = layout(name)?;
    let grid = options.grid.unwrap_or(layout.grid).points();
    let integrator = SepIntegrator::with_nodes(options.nodes)?;
    let mut rows: Vec<Row> = Vec::new();
    for (i, s) in layout.series.iter().enumerate() {
        if layout.simulate {
            rows.extend(simulated_rows(
                *s,
                &grid,
                series_seed(options.seed, i),
                &options.budget,
            )?);
        }
        rows.extend(analytic_rows(*s, &grid, &integrator, layout.bound)?);
    }
    let csv = write_csv(&rows)?;
    let out = FigureOutput {
        name: name.to_string(),
        csv,
        plot_script: String::new(),
    };
    let plot_script = plot_script(&out.csv_file_name(), layout.title, layout.ylabel, &layout);
    Ok(FigureOutput { plot_script, ..out })
}

fn plot_script(csv_name: &str, title: &str, ylabel: &str, layout: &Layout) -> String {
    let shown = if layout.series.iter().any(|s| s.order > 2) {
        "{\"ser\", \"sep_exact\", \"sep_bound\"}"
    } else {
        "{\"ber\", \"sep_exact\", \"sep_bound\"}"
    };
    format!(
        r#"import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "{csv_name}"
series = defaultdict(list)
with open(path, newline="") as f:
    for row in csv.DictReader(f):
        if row["metric"] not in {shown}:
            continue
        value = float(row["value"])
        if value <= 0.0:
            continue
        key = (row["scheme"], int(row["N"]), int(row["M"]), row["metric"])
        series[key].append((float(row["snr_db"]), value))

styles = {{"ber": "o", "ser": "o", "sep_exact": "-", "sep_bound": "--"}}
fig, ax = plt.subplots(figsize=(7, 5))
for (scheme, n, m, metric), pts in sorted(series.items()):
    pts.sort()
    x, y = zip(*pts)
    label = f"{{scheme}} N={{n}} M={{m}} ({{metric}})"
    if metric in ("ber", "ser"):
        ax.semilogy(x, y, styles[metric], mfc="none", label=label)
    else:
        ax.semilogy(x, y, styles[metric], label=label)
ax.set_xlabel("Es/N0 (dB)")
ax.set_ylabel("{ylabel}")
ax.set_title("{title}")
ax.set_ylim(1e-6, 1)
ax.grid(True, which="both", alpha=0.3)
ax.legend(fontsize="small")
fig.tight_layout()
fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
"#
    )
}
