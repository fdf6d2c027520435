use genepy_core::{GoalWeights, GroupProfile, RankSeries, ScorePanel, WeightsEvolution};

use super::svg::Svg;
use super::{ChartKind, ChartSpec, ReportError};

/// Year colors for grouped bars, cycled when there are more years.
const YEAR_PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#9c755f",
];
const NATIONAL: &str = "#222222";
const ENDED: &str = "#9a9a9a";

fn hatch_defs(spec: &ChartSpec) -> String {
    format!(
        "<defs>\n\
         <pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"6\" height=\"6\" patternTransform=\"rotate(45)\">\
         <rect width=\"6\" height=\"6\" fill=\"#f4f4f4\"/><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#9a9a9a\" stroke-width=\"2\"/></pattern>\n\
         <linearGradient id=\"ramp\" x1=\"0\" y1=\"0\" x2=\"1\" y2=\"0\">\
         <stop offset=\"0\" stop-color=\"{}\"/><stop offset=\"1\" stop-color=\"{}\"/></linearGradient>\n\
         </defs>",
        spec.low.hex(),
        spec.high.hex()
    )
}

fn score_text(x: f64) -> String {
    format!("{x:.3}")
}

/// One rect per cell, colored linearly from `low` (score 0) to `high`
/// (score 100). Missing cells are hatched.
pub fn emit_heatmap(panel: &ScorePanel, spec: &ChartSpec) -> Result<String, ReportError> {
    spec.check(ChartKind::Heatmap)?;
    let (ne, nc) = (panel.n_entities(), panel.n_categories());
    let (left, top, right, bottom) = (110.0, 90.0, 20.0, 60.0);
    let cw = ((f64::from(spec.width) - left - right) / nc as f64).max(1.0);
    let ch = ((f64::from(spec.height) - top - bottom) / ne as f64).max(1.0);

    let mut s = Svg::new(spec.width, spec.height, &spec.title);
    s.raw(&hatch_defs(spec));
    for (j, c) in panel.categories().iter().enumerate() {
        s.vtext("x-tick", left + (j as f64 + 0.5) * cw, top - 6.0, c);
    }
    for (i, e) in panel.entities().iter().enumerate() {
        let y = top + i as f64 * ch;
        s.text("y-tick", left - 6.0, y + ch / 2.0 + 4.0, "end", e);
        for (j, c) in panel.categories().iter().enumerate() {
            let x = left + j as f64 * cw;
            match panel.value(i, j) {
                Some(v) => {
                    let tip = format!("{e} / {c}: {}", score_text(v));
                    s.rect("cell", x, y, cw, ch, &spec.score_color(v).hex(), Some(&tip));
                }
                None => {
                    let tip = format!("{e} / {c}: missing");
                    s.rect("cell missing", x, y, cw, ch, "url(#hatch)", Some(&tip));
                }
            }
        }
    }
    let ly = top + ne as f64 * ch + 20.0;
    let lw = (f64::from(spec.width) - left - right).min(240.0);
    s.rect("legend", left, ly, lw, 12.0, "url(#ramp)", None);
    s.text("legend-label", left, ly + 26.0, "start", "0");
    s.text("legend-label", left + lw, ly + 26.0, "end", "100");
    Ok(s.finish())
}

/// Entities on the left, categories on the right, one edge per present
/// cell. Stroke width and color both grow with the score.
pub fn emit_bipartite(panel: &ScorePanel, subset: &[&str], spec: &ChartSpec) -> Result<String, ReportError> {
    spec.check(ChartKind::Bipartite)?;
    if subset.is_empty() {
        return Err(ReportError::Empty("entity subset"));
    }
    let rows: Vec<usize> = subset
        .iter()
        .map(|id| panel.entity_index(id).ok_or_else(|| ReportError::UnknownEntity((*id).to_owned())))
        .collect::<Result<_, _>>()?;
    let nc = panel.n_categories();
    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let (top, bottom) = (50.0, 30.0);
    let (xl, xr) = (140.0, w - 140.0);
    let spread = |k: usize, n: usize| {
        if n == 1 {
            top + (h - top - bottom) / 2.0
        } else {
            top + k as f64 * (h - top - bottom) / (n - 1) as f64
        }
    };

    let mut edges: Vec<(f64, usize, usize)> = Vec::new();
    for (k, &i) in rows.iter().enumerate() {
        for j in 0..nc {
            if let Some(v) = panel.value(i, j) {
                edges.push((v, k, j));
            }
        }
    }
    // strongest edges drawn last so they sit on top
    edges.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut s = Svg::new(spec.width, spec.height, &spec.title);
    for &(v, k, j) in &edges {
        let width = 0.5 + 5.5 * (v / genepy_core::panel::MAX_SCORE).clamp(0.0, 1.0);
        let tip = format!("{} / {}: {}", subset[k], panel.categories()[j], score_text(v));
        s.line(
            "edge",
            xl,
            spread(k, rows.len()),
            xr,
            spread(j, nc),
            &spec.score_color(v).hex(),
            width,
            Some(&tip),
        );
    }
    for (k, id) in subset.iter().enumerate() {
        let y = spread(k, rows.len());
        s.circle("node entity", xl, y, 5.0, "#555555", None);
        s.text("node-label", xl - 10.0, y + 4.0, "end", id);
    }
    for (j, c) in panel.categories().iter().enumerate() {
        let y = spread(j, nc);
        s.circle("node category", xr, y, 5.0, "#555555", None);
        s.text("node-label", xr + 10.0, y + 4.0, "start", c);
    }
    Ok(s.finish())
}

/// Horizontal bars with length proportional to the weight and the value
/// printed to 3 decimals.
pub fn emit_weight_bars(w: &GoalWeights, spec: &ChartSpec) -> Result<String, ReportError> {
    spec.check(ChartKind::WeightBars)?;
    if w.weights.is_empty() {
        return Err(ReportError::Empty("weights"));
    }
    let (left, top, right, bottom) = (90.0, 45.0, 70.0, 20.0);
    let full = f64::from(spec.width) - left - right;
    let band = (f64::from(spec.height) - top - bottom) / w.weights.len() as f64;
    let max = w.weights.iter().copied().filter(|x| x.is_finite()).fold(0.0, f64::max);

    let mut s = Svg::new(spec.width, spec.height, &spec.title);
    for (k, (c, &v)) in w.categories.iter().zip(&w.weights).enumerate() {
        let frac = if max > 0.0 && v.is_finite() { (v / max).max(0.0) } else { 0.0 };
        let y = top + k as f64 * band;
        let bh = band * 0.7;
        s.text("y-tick", left - 6.0, y + bh / 2.0 + 4.0, "end", c);
        let tip = format!("{c}: {}", score_text(v));
        s.rect("bar", left, y, full * frac, bh, &spec.ramp(frac).hex(), Some(&tip));
        s.text("value", left + full * frac + 4.0, y + bh / 2.0 + 4.0, "start", &score_text(v));
    }
    s.line("axis", left, top - 4.0, left, top + band * w.weights.len() as f64, "#333333", 1.0, None);
    Ok(s.finish())
}

/// Thin per-entity weighted-performance lines colored by group, thick
/// group-mean lines, a thick national line, and the best and worst entity
/// marked in every category.
pub fn emit_weighted_lines(profile: &GroupProfile, spec: &ChartSpec) -> Result<String, ReportError> {
    spec.check(ChartKind::WeightedLines)?;
    let perf = &profile.performance;
    let nc = profile.categories.len();
    if perf.categories != profile.categories {
        return Err(ReportError::AxisMismatch("performance and profile categories"));
    }
    if profile.national_curve.len() != nc || profile.group_curves.iter().any(|c| c.len() != nc) {
        return Err(ReportError::AxisMismatch("curve length"));
    }
    if perf.entities.is_empty() || nc == 0 {
        return Err(ReportError::Empty("weighted performance"));
    }
    let (left, top, right, bottom) = (60.0, 50.0, 150.0, 90.0);
    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let plot_w = w - left - right;
    let plot_h = h - top - bottom;
    let x_of = |j: usize| {
        if nc == 1 {
            left + plot_w / 2.0
        } else {
            left + j as f64 * plot_w / (nc - 1) as f64
        }
    };
    let ymax = perf.values.iter().flatten().copied().filter(|x| x.is_finite()).fold(0.0, f64::max);
    let ymax = if ymax > 0.0 { ymax * 1.05 } else { 1.0 };
    let y_of = |v: f64| top + plot_h * (1.0 - v / ymax);
    let group_color = |g: usize| spec.ramp(1.0 - g as f64 / 2.0).hex();
    let curve_points = |curve: &[Option<f64>]| -> Vec<(f64, f64)> {
        curve
            .iter()
            .enumerate()
            .filter_map(|(j, v)| v.map(|v| (x_of(j), y_of(v))))
            .collect()
    };

    let mut s = Svg::new(spec.width, spec.height, &spec.title);
    s.line("axis", left, top, left, top + plot_h, "#333333", 1.0, None);
    s.line("axis", left, top + plot_h, left + plot_w, top + plot_h, "#333333", 1.0, None);
    for k in 0..=4 {
        let v = ymax * k as f64 / 4.0;
        s.text("y-tick", left - 6.0, y_of(v) + 4.0, "end", &format!("{v:.1}"));
    }
    for (j, c) in profile.categories.iter().enumerate() {
        s.vtext("x-tick", x_of(j), top + plot_h + 16.0, c);
    }

    for (i, e) in perf.entities.iter().enumerate() {
        let g = profile.group_of(e).unwrap_or(2);
        let pts = curve_points(perf.row(i));
        let class = format!("entity-line group-{g}");
        s.polyline(&class, &pts, &group_color(g), 0.8, " stroke-opacity=\"0.55\"", Some(e));
    }
    let names = ["top third", "middle third", "bottom third"];
    for (g, curve) in profile.group_curves.iter().enumerate() {
        let class = format!("group-mean group-{g}");
        s.polyline(&class, &curve_points(curve), &group_color(g), 3.5, "", Some(names[g]));
    }
    s.polyline(
        "national",
        &curve_points(&profile.national_curve),
        NATIONAL,
        3.5,
        " stroke-dasharray=\"7 4\"",
        Some("national mean"),
    );

    for j in 0..nc {
        let present: Vec<(usize, f64)> = (0..perf.entities.len())
            .filter_map(|i| perf.get(i, j).map(|v| (i, v)))
            .collect();
        // ties resolve to the smaller entity id
        let pick = |better: fn(f64, f64) -> bool| {
            present.iter().copied().reduce(|a, b| {
                if better(b.1, a.1) || (b.1 == a.1 && perf.entities[b.0] < perf.entities[a.0]) {
                    b
                } else {
                    a
                }
            })
        };
        let best = pick(|x, y| x > y);
        let worst = pick(|x, y| x < y);
        for (class, hit, dy) in [("best", best, -8.0), ("worst", worst, 14.0)] {
            if let Some((i, v)) = hit {
                let tip = format!("{class} in {}: {} ({})", profile.categories[j], perf.entities[i], score_text(v));
                s.circle(class, x_of(j), y_of(v), 3.5, if class == "best" { "#1a7f37" } else { "#c0392b" }, Some(&tip));
                s.text(&format!("{class}-label"), x_of(j), y_of(v) + dy, "middle", &perf.entities[i]);
            }
        }
    }

    let lx = left + plot_w + 20.0;
    for (k, (label, color)) in names
        .iter()
        .enumerate()
        .map(|(g, n)| (*n, group_color(g)))
        .chain(std::iter::once(("national mean", NATIONAL.to_owned())))
        .enumerate()
    {
        let y = top + 10.0 + k as f64 * 18.0;
        s.line("legend", lx, y, lx + 24.0, y, &color, 3.0, None);
        s.text("legend-label", lx + 30.0, y + 4.0, "start", label);
    }
    Ok(s.finish())
}

/// Rank against year with rank 1 at the top, one line per trajectory,
/// colored by final-year rank. Split-derived lines are dashed.
pub fn emit_rank_bump(series: &RankSeries, spec: &ChartSpec) -> Result<String, ReportError> {
    spec.check(ChartKind::RankBump)?;
    if series.years.is_empty() || series.trajectories.is_empty() {
        return Err(ReportError::Empty("rank series"));
    }
    let (left, top, right, bottom) = (50.0, 60.0, 110.0, 40.0);
    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let plot_w = w - left - right;
    let plot_h = h - top - bottom;
    let ny = series.years.len();
    let x_of = |k: usize| {
        if ny == 1 {
            left + plot_w / 2.0
        } else {
            left + k as f64 * plot_w / (ny - 1) as f64
        }
    };
    let max_rank = series
        .trajectories
        .iter()
        .flat_map(|t| t.points.iter().map(|p| p.rank))
        .max()
        .unwrap_or(1);
    let y_of = |r: usize| {
        if max_rank == 1 {
            top + plot_h / 2.0
        } else {
            top + (r - 1) as f64 * plot_h / (max_rank - 1) as f64
        }
    };
    let max_final = series.trajectories.iter().filter_map(|t| t.final_rank).max().unwrap_or(1);
    let color = |r: Option<usize>| match r {
        None => ENDED.to_owned(),
        Some(_) if max_final == 1 => spec.high.hex(),
        Some(r) => spec.ramp(1.0 - (r - 1) as f64 / (max_final - 1) as f64).hex(),
    };
    let year_pos = |y: &str| series.years.iter().position(|x| x == y);

    let mut s = Svg::new(spec.width, spec.height, &spec.title);
    for (k, y) in series.years.iter().enumerate() {
        s.line("grid", x_of(k), top, x_of(k), top + plot_h, "#e0e0e0", 1.0, None);
        s.text("x-tick", x_of(k), top - 14.0, "middle", y);
    }
    for r in 1..=max_rank {
        s.text("y-tick", left - 10.0, y_of(r) + 4.0, "end", &r.to_string());
    }
    // draw the best-ranked lines last so they stay visible
    for t in series.trajectories.iter().rev() {
        let pts: Vec<(f64, f64)> = t
            .points
            .iter()
            .filter_map(|p| year_pos(&p.year).map(|k| (x_of(k), y_of(p.rank))))
            .collect();
        let c = color(t.final_rank);
        let (class, extra) = if t.is_split_derived() {
            ("trajectory split-derived", " stroke-dasharray=\"5 3\"")
        } else {
            ("trajectory", "")
        };
        s.polyline(class, &pts, &c, 2.2, extra, Some(&t.entity));
        for (p, &(x, y)) in t.points.iter().zip(&pts) {
            let fill = if p.inherited { "#ffffff" } else { c.as_str() };
            s.circle("rank-point", x, y, 3.2, fill, Some(&format!("{} {}: {}", p.entity, p.year, p.rank)));
        }
        if let Some(&(x, y)) = pts.last() {
            s.text("entity-label", x + 8.0, y + 4.0, "start", &t.entity);
        }
    }
    Ok(s.finish())
}

/// One group per category and one bar per year with a value; years
/// without a value leave an empty slot.
pub fn emit_grouped_bars(evo: &WeightsEvolution, spec: &ChartSpec) -> Result<String, ReportError> {
    spec.check(ChartKind::GroupedBars)?;
    if evo.categories.is_empty() || evo.years.is_empty() {
        return Err(ReportError::Empty("weights table"));
    }
    let (left, top, right, bottom) = (60.0, 50.0, 110.0, 60.0);
    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let plot_w = w - left - right;
    let plot_h = h - top - bottom;
    let ny = evo.years.len();
    let group_w = plot_w / evo.categories.len() as f64;
    let bar_w = group_w * 0.8 / ny as f64;
    let vmax = evo.values.iter().flatten().flatten().copied().filter(|x| x.is_finite()).fold(0.0, f64::max);
    let vmax = if vmax > 0.0 { vmax * 1.1 } else { 1.0 };
    let y_of = |v: f64| top + plot_h * (1.0 - v / vmax);
    let year_color = |k: usize| YEAR_PALETTE[k % YEAR_PALETTE.len()];

    let mut s = Svg::new(spec.width, spec.height, &spec.title);
    s.line("axis", left, top, left, top + plot_h, "#333333", 1.0, None);
    s.line("axis", left, top + plot_h, left + plot_w, top + plot_h, "#333333", 1.0, None);
    for k in 0..=4 {
        let v = vmax * k as f64 / 4.0;
        s.text("y-tick", left - 6.0, y_of(v) + 4.0, "end", &format!("{v:.2}"));
    }
    for (c, (cat, vals)) in evo.categories.iter().zip(&evo.values).enumerate() {
        let gx = left + c as f64 * group_w + group_w * 0.1;
        s.text("x-tick", gx + group_w * 0.4, top + plot_h + 16.0, "middle", cat);
        for (k, v) in vals.iter().enumerate() {
            if let Some(v) = *v {
                let y = y_of(v.max(0.0));
                let tip = format!("{cat} {}: {}", evo.years[k], score_text(v));
                let class = format!("bar year-{k}");
                s.rect(&class, gx + k as f64 * bar_w, y, bar_w, top + plot_h - y, year_color(k), Some(&tip));
            }
        }
    }
    let lx = left + plot_w + 20.0;
    for (k, y) in evo.years.iter().enumerate() {
        let ly = top + 10.0 + k as f64 * 18.0;
        s.rect("legend", lx, ly - 9.0, 12.0, 12.0, year_color(k), None);
        s.text("legend-label", lx + 18.0, ly + 2.0, "start", y);
    }
    Ok(s.finish())
}
