//! The five subcommands. Each writes its whole output to stdout in one
//! deterministic buffer.

use roguewave::fv::{
    advance_to, compare_profiles, fv_step, grid_l1_distance, init_from_analytic,
    max_signal_speed, restrict, rusanov_flux, FvCell, FvGrid,
};
use roguewave::profiles::profile_depth;
use roguewave::shock::{rh_locus, simulate, solve_shock_system};
use serde::Serialize;

use crate::output::fmt_g10;
use crate::scenario::Resolved;
use crate::CliError;

#[derive(Serialize)]
struct SetupSummary {
    q_ref: f64,
    #[serde(rename = "q_P")]
    q_p: f64,
    c_star: f64,
    c_ref: f64,
    #[serde(rename = "A_ref")]
    a_ref: f64,
    m_ref: f64,
    #[serde(rename = "F_ref")]
    froude_ref: f64,
    lambda_min: f64,
    admissibility: String,
    west_extent: f64,
    east_extent: f64,
}

pub fn setup(res: &Resolved) -> Result<String, CliError> {
    let cfg = &res.config;
    let summary = SetupSummary {
        q_ref: cfg.q_ref,
        q_p: cfg.q_p,
        c_star: cfg.c_star,
        c_ref: cfg.c_ref,
        a_ref: cfg.a_ref,
        m_ref: cfg.m_ref,
        froude_ref: cfg.froude_ref,
        lambda_min: res.lambda_min,
        admissibility: if res.admissible { "admissible" } else { "inadmissible" }.to_string(),
        west_extent: res.west_extent,
        east_extent: res.east_extent,
    };
    let mut out = serde_json::to_string_pretty(&summary)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    out.push('\n');
    Ok(out)
}

pub fn profile(
    res: &Resolved,
    t: f64,
    x_min: f64,
    x_max: f64,
    dx: f64,
) -> Result<String, CliError> {
    if !(dx > 0.0) {
        return Err(CliError::Config(format!("dx must be positive, got {dx}")));
    }
    if !(x_min < x_max) {
        return Err(CliError::Config(format!("need x_min < x_max, got {x_min} >= {x_max}")));
    }
    if !(t >= 0.0) {
        return Err(CliError::Config(format!("t must be nonnegative, got {t}")));
    }
    let cfg = &res.config;
    let x0 = if t == 0.0 {
        0.0
    } else {
        solve_shock_system(t, cfg, None)
            .map_err(|e| CliError::Numerical(e.to_string()))?
            .x0
    };
    let west = cfg.west_branch();
    let east = cfg.east_branch();
    let rows = ((x_max - x_min) / dx).floor() as usize + 1;
    let mut out = String::with_capacity(rows * 48);
    out.push_str("x,q,m,side\n");
    for i in 0..rows {
        let x = x_min + dx * i as f64;
        let (q, m, side) = if x < x0 {
            let q = profile_depth(x, t, &west, cfg)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            (q, cfg.west_line.flux_at(q), "west")
        } else {
            let q = profile_depth(x, t, &east, cfg)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            (q, cfg.east_line.flux_at(q), "east")
        };
        out.push_str(&format!("{},{},{},{side}\n", fmt_g10(x), fmt_g10(q), fmt_g10(m)));
    }
    Ok(out)
}

pub fn run_simulation(res: &Resolved) -> Result<String, CliError> {
    let f = &res.file;
    let record = simulate(
        f.t_end,
        f.dt,
        &f.output_times(),
        &res.config,
        f.x1,
        f.x2,
    )
    .map_err(|e| CliError::Numerical(e.to_string()))?;
    let mut out = String::new();
    out.push_str("t,x0,ql,qr,amplitude,ml,mr,shock_speed,mass_rel_error\n");
    for s in &record.states {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            fmt_g10(s.t),
            fmt_g10(s.x0),
            fmt_g10(s.q_l),
            fmt_g10(s.q_r),
            fmt_g10(s.amplitude),
            fmt_g10(s.m_l),
            fmt_g10(s.m_r),
            fmt_g10(s.speed),
            fmt_g10(s.mass_rel_error.unwrap_or(f64::NAN)),
        ));
    }
    Ok(out)
}

pub fn phase_plane(res: &Resolved, n: usize) -> Result<String, CliError> {
    if n < 2 {
        return Err(CliError::Config(format!("n must be at least 2, got {n}")));
    }
    let cfg = &res.config;
    let mut out = String::new();
    out.push_str("branch,q,m\n");
    let steps = (n - 1) as f64;
    for i in 0..n {
        let q = cfg.q_0 + (cfg.q_ref - cfg.q_0) * i as f64 / steps;
        out.push_str(&format!("west,{},{}\n", fmt_g10(q), fmt_g10(cfg.west_line.flux_at(q))));
    }
    for i in 0..n {
        let q = cfg.q_star + (cfg.q_p - cfg.q_star) * i as f64 / steps;
        out.push_str(&format!("east,{},{}\n", fmt_g10(q), fmt_g10(cfg.east_line.flux_at(q))));
    }
    let locus = rh_locus(n, cfg).map_err(|e| CliError::Numerical(e.to_string()))?;
    for s in &locus {
        out.push_str(&format!("locus_l,{},{}\n", fmt_g10(s.q_l), fmt_g10(s.m_l)));
    }
    for s in &locus {
        out.push_str(&format!("locus_r,{},{}\n", fmt_g10(s.q_r), fmt_g10(s.m_r)));
    }
    Ok(out)
}

#[derive(Serialize)]
struct FvReport {
    scenario_hash: String,
    dx: f64,
    cfl: f64,
    t_end: f64,
    l1_coarse: f64,
    linf_coarse: f64,
    l1_fine: f64,
    linf_fine: f64,
    /// Reference-free convergence order from the dx, dx/2, dx/4 triplet.
    order: f64,
    still_water_preserved: bool,
    mass_defect_per_step: f64,
}

pub fn validate_fv(res: &Resolved, dx: f64, cfl: f64, t_end: f64) -> Result<String, CliError> {
    if !(t_end > 0.0 && t_end <= 200.0) {
        return Err(CliError::Config(format!(
            "t_end must lie in (0, 200] for the validation horizon, got {t_end}"
        )));
    }
    if !(dx > 0.0) {
        return Err(CliError::Config(format!("dx must be positive, got {dx}")));
    }
    if !(cfl > 0.0 && cfl <= 0.9) {
        return Err(CliError::Config(format!("cfl must lie in (0, 0.9], got {cfl}")));
    }
    let cfg = &res.config;
    let num = |e: roguewave::fv::FvError| CliError::Numerical(e.to_string());

    // domain around the junction trajectory, snapped to a multiple of dx so
    // the refinement triplet aligns cell-for-cell
    let x_left = -2.5e4;
    let span = cfg.a_ref * t_end + 2.5e4 - x_left;
    let x_right = x_left + (span / dx).ceil() * dx;

    let run = |h: f64| -> Result<FvGrid<f64>, CliError> {
        let g0 = init_from_analytic(0.0, x_left, x_right, h, cfg).map_err(num)?;
        advance_to(&g0, t_end, cfl, cfg).map_err(num)
    };
    let coarse = run(dx)?;
    let medium = run(dx / 2.0)?;
    let fine = run(dx / 4.0)?;
    let (l1_coarse, linf_coarse) = compare_profiles(&coarse, t_end, cfg).map_err(num)?;
    let (l1_fine, linf_fine) = compare_profiles(&medium, t_end, cfg).map_err(num)?;
    let d_coarse = grid_l1_distance(&coarse, &restrict(&medium)).map_err(num)?;
    let d_fine = grid_l1_distance(&medium, &restrict(&fine)).map_err(num)?;
    let order = (d_coarse / d_fine).log2();

    let still = FvGrid {
        x_left: 0.0,
        dx,
        t: 0.0,
        cells: vec![FvCell { q: cfg.q_star, m: 0.0 }; 32],
    };
    let stepped = fv_step(&still, cfl, cfg).map_err(num)?;
    let still_water_preserved = still
        .cells
        .iter()
        .zip(&stepped.cells)
        .all(|(a, b)| a.q == b.q && a.m == b.m);

    let g0 = init_from_analytic(0.0, x_left, x_right, dx, cfg).map_err(num)?;
    let g1 = fv_step(&g0, cfl, cfg).map_err(num)?;
    let dt = g1.t - g0.t;
    let smax = max_signal_speed(&g0, cfg.g).map_err(num)?;
    debug_assert!(smax > 0.0);
    let n = g0.cells.len();
    let f_left = rusanov_flux(g0.cells[0], g0.cells[0], cfg.g).0;
    let f_right = rusanov_flux(g0.cells[n - 1], g0.cells[n - 1], cfg.g).0;
    let mass_defect_per_step = ((g1.mass() - g0.mass()) - dt * (f_left - f_right)).abs() / g0.mass();

    let report = FvReport {
        scenario_hash: res.hash.clone(),
        dx,
        cfl,
        t_end,
        l1_coarse,
        linf_coarse,
        l1_fine,
        linf_fine,
        order,
        still_water_preserved,
        mass_defect_per_step,
    };
    let mut out =
        serde_json::to_string_pretty(&report).map_err(|e| CliError::Numerical(e.to_string()))?;
    out.push('\n');
    Ok(out)
}
