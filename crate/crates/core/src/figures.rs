//! Figure-keyed result tables.
//!
//! Every table is built from per-focal results that were computed
//! independently; nothing here touches randomness, and iteration follows the
//! focal order (sorted by author id), so the output is fully determined by
//! its input.

use std::collections::{BTreeMap, BTreeSet};

use crate::config::AnalysisParams;
use crate::decompose::{
    collaborator_stats_at, mean_and_se, pooled_topic_distribution, topic_span_stats, topics_vs_copub,
    CollaboratorSeries, CollaboratorStats,
};
use crate::metrics::join::JoinCovariate;
use crate::metrics::{
    deciles, join_covariate_tau, join_probability, kendall_tau, ks_test, pearson_r, pooled_join_probability,
    significance_stars, top_percent, JoinBinning, JoinEvent, JoinMode, SimilarityMetric, SimilarityVariant,
};
use crate::pipeline::{DisciplineResults, FocalResult};
use crate::report::{StatReport, Table};
use crate::row;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Real,
    Shuffled,
}

impl Side {
    fn suffix(self) -> &'static str {
        match self {
            Side::Real => "",
            Side::Shuffled => "_shuffled",
        }
    }
}

impl FocalResult {
    fn side(&self, side: Side) -> &[CollaboratorSeries] {
        match side {
            Side::Real => &self.collaborators,
            Side::Shuffled => self.shuffled.as_deref().unwrap_or(&[]),
        }
    }

    fn cohort_side(&self, side: Side) -> &[CollaboratorSeries] {
        match side {
            Side::Real => &self.cohort.collaborators,
            Side::Shuffled => self.cohort.shuffled.as_deref().unwrap_or(&[]),
        }
    }
}

/// Scalar per focal scientist used for grouping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Key {
    Productivity,
    Impact,
}

impl Key {
    const ALL: [Key; 2] = [Key::Productivity, Key::Impact];

    fn name(self) -> &'static str {
        match self {
            Key::Productivity => "productivity",
            Key::Impact => "impact",
        }
    }

    fn value(self, f: &FocalResult) -> f64 {
        match self {
            Key::Productivity => f.profile.paper_count as f64,
            Key::Impact => f.profile.mean_c10,
        }
    }

    fn cohort_value(self, f: &FocalResult) -> f64 {
        match self {
            Key::Productivity => f.cohort.paper_count as f64,
            Key::Impact => f.cohort.mean_c10,
        }
    }
}

/// Decile of every focal scientist under `key`, in focal order.
fn decile_of(focal: &[FocalResult], key: Key) -> Vec<u32> {
    let items: Vec<(String, f64)> = focal.iter().map(|f| (f.author.clone(), key.value(f))).collect();
    let map = deciles(&items);
    focal.iter().map(|f| map[&f.author]).collect()
}

/// Named subsets of focal scientists: everyone, then the top-k% most
/// productive and most impactful for each configured k.
struct Group<'a> {
    name: &'static str,
    top_percent: u32,
    members: Vec<&'a FocalResult>,
}

fn top_group<'a>(
    focal: &[&'a FocalResult],
    k: u32,
    key: Key,
    value: impl Fn(Key, &FocalResult) -> f64,
) -> Vec<&'a FocalResult> {
    let items: Vec<(String, f64)> = focal.iter().map(|f| (f.author.clone(), value(key, f))).collect();
    let top: BTreeSet<String> = top_percent(&items, k).unwrap_or_default().into_iter().collect();
    focal.iter().copied().filter(|f| top.contains(&f.author)).collect()
}

fn groups<'a>(focal: &'a [FocalResult], top_k: &[u32]) -> Vec<Group<'a>> {
    let all: Vec<&FocalResult> = focal.iter().collect();
    let mut out = vec![Group {
        name: "all",
        top_percent: 100,
        members: all.clone(),
    }];
    for &k in top_k {
        for (name, key) in [("productive", Key::Productivity), ("impactful", Key::Impact)] {
            out.push(Group {
                name,
                top_percent: k,
                members: top_group(&all, k, key, Key::value),
            });
        }
    }
    out
}

fn stats_at(
    focal: &[&FocalResult],
    min_copub: usize,
    list: impl Fn(&FocalResult) -> &[CollaboratorSeries],
) -> Vec<CollaboratorStats> {
    focal
        .iter()
        .map(|f| collaborator_stats_at(list(f), min_copub))
        .collect()
}

fn single_fractions(stats: &[CollaboratorStats]) -> Vec<f64> {
    stats.iter().filter_map(|s| s.fraction_single).collect()
}

fn n_used(stats: &[CollaboratorStats]) -> usize {
    stats.iter().filter(|s| !s.is_empty()).count()
}

fn histogram(values: &[f64], n_bins: usize, name: &str) -> Table {
    let mut t = Table::new(name, &["bin_low", "bin_high", "count", "fraction"]);
    let mut counts = vec![0usize; n_bins];
    for &v in values {
        let b = ((v * n_bins as f64).floor() as usize).min(n_bins - 1);
        counts[b] += 1;
    }
    for (b, &c) in counts.iter().enumerate() {
        let fraction = (!values.is_empty()).then(|| c as f64 / values.len() as f64);
        t.push(row![
            b as f64 / n_bins as f64,
            (b + 1) as f64 / n_bins as f64,
            c,
            fraction
        ]);
    }
    t
}

fn count_distribution<K: Ord + Copy>(values: impl IntoIterator<Item = K>) -> (BTreeMap<K, usize>, usize) {
    let mut map = BTreeMap::new();
    let mut n = 0;
    for v in values {
        *map.entry(v).or_default() += 1;
        n += 1;
    }
    (map, n)
}

/// Doubling bins over non-negative values: [0,1), [1,2), [2,4), ...
fn log2_bin(v: f64) -> (f64, f64) {
    if v < 1.0 {
        (0.0, 1.0)
    } else {
        let e = v.log2().floor() as i32;
        (2f64.powi(e), 2f64.powi(e + 1))
    }
}

fn ks_row(a: &[f64], b: &[f64]) -> (Option<f64>, Option<f64>, Option<&'static str>) {
    match ks_test(a, b) {
        Ok(r) => (Some(r.d), Some(r.p_value), Some(significance_stars(r.p_value))),
        Err(_) => (None, None, None),
    }
}

fn tau_or_null(x: &[f64], y: &[f64]) -> (Option<f64>, usize) {
    (kendall_tau(x, y).ok().map(|r| r.value), x.len())
}

pub fn build_report(disciplines: &[DisciplineResults], params: &AnalysisParams) -> StatReport {
    let mut report = StatReport::default();
    report.add(summary(disciplines, params));
    let primary = &disciplines[0];
    let focal = &primary.focal;
    let mut sides = vec![Side::Real];
    if params.surrogate {
        sides.push(Side::Shuffled);
    }
    for &side in &sides {
        fig2(&mut report, focal, params, side);
        fig3_topic_counts(&mut report, focal, params, side);
    }
    fig3_scatter(&mut report, focal);
    fig3_deciles(&mut report, focal, params);
    fig4(&mut report, focal);
    fig5(&mut report, focal, params);
    for &side in &sides {
        fig6_cohorts(&mut report, focal, params, side);
        fig6_disciplines(&mut report, disciplines, params, side);
    }
    fig6_groups(&mut report, disciplines, focal, params);
    if params.surrogate {
        fig_s3(&mut report, focal, params);
    }
    fig_s4(&mut report, focal);
    fig_s5(&mut report, focal, params);
    fig_s7(&mut report, focal);
    fig_s8(&mut report, focal, params);
    note4(&mut report, focal);
    report
}

fn summary(disciplines: &[DisciplineResults], params: &AnalysisParams) -> Table {
    let mut t = Table::new(
        "summary",
        &[
            "discipline",
            "n_papers",
            "n_authors",
            "n_focal",
            "mean_topics",
            "fraction_single",
            "fraction_single_shuffled",
            "fraction_single_high",
            "join_overall",
            "join_recent",
        ],
    );
    for d in disciplines {
        let all: Vec<&FocalResult> = d.focal.iter().collect();
        let topics: Vec<f64> = d.focal.iter().map(|f| f.n_topics as f64).collect();
        let mean = |v: Vec<f64>| mean_and_se(&v).0;
        let real = mean(single_fractions(&stats_at(&all, params.min_copub, |f| {
            f.side(Side::Real)
        })));
        let shuffled = params
            .surrogate
            .then(|| {
                mean(single_fractions(&stats_at(&all, params.min_copub, |f| {
                    f.side(Side::Shuffled)
                })))
            })
            .flatten();
        let high = mean(single_fractions(&stats_at(&all, params.min_copub_high, |f| {
            f.side(Side::Real)
        })));
        let events: Vec<JoinEvent> = d.focal.iter().flat_map(|f| f.join_events.iter().cloned()).collect();
        let join = |m| pooled_join_probability(&events, m).map(|p| p.2);
        t.push(row![
            d.name.as_str(),
            d.n_papers,
            d.n_authors,
            d.focal.len(),
            mean(topics),
            real,
            shuffled,
            high,
            join(JoinMode::Overall),
            join(JoinMode::Recent),
        ]);
    }
    t
}

fn topic_distribution(name: String, stats: &[CollaboratorStats]) -> Table {
    let mut t = Table::new(name, &["n_topics", "fraction", "n_focal"]);
    if let Some(dist) = pooled_topic_distribution(stats) {
        for (k, v) in dist {
            t.push(row![k, v, n_used(stats)]);
        }
    }
    t
}

fn copub_tables(report: &mut StatReport, focal: &[FocalResult], side: Side) {
    let rows = topics_vs_copub(focal.iter().flat_map(|f| f.side(side)));
    let mut e = Table::new(
        format!("fig2e{}", side.suffix()),
        &["bin_low", "bin_high", "n", "mean_topics", "se_topics"],
    );
    let mut f = Table::new(
        format!("fig2f{}", side.suffix()),
        &["bin_low", "bin_high", "n", "fraction_single", "se_fraction"],
    );
    for r in rows {
        e.push(row![r.bin_low, r.bin_high, r.n, r.mean_topics, r.se_topics]);
        f.push(row![r.bin_low, r.bin_high, r.n, r.fraction_single, r.se_fraction]);
    }
    report.add(e);
    report.add(f);
}

fn fig2(report: &mut StatReport, focal: &[FocalResult], params: &AnalysisParams, side: Side) {
    let all: Vec<&FocalResult> = focal.iter().collect();
    let s = side.suffix();
    for (dist, hist, min) in [
        ("fig2a", "fig2b", params.min_copub),
        ("fig2c", "fig2d", params.min_copub_high),
    ] {
        let stats = stats_at(&all, min, |f| f.side(side));
        report.add(topic_distribution(format!("{dist}{s}"), &stats));
        report.add(histogram(&single_fractions(&stats), 10, &format!("{hist}{s}")));
    }
    copub_tables(report, focal, side);
}

fn fig3_topic_counts(report: &mut StatReport, focal: &[FocalResult], params: &AnalysisParams, side: Side) {
    let s = side.suffix();
    let mut b = Table::new(
        format!("fig3b{s}"),
        &[
            "group",
            "top_percent",
            "bin_low",
            "bin_high",
            "n",
            "fraction_single",
            "se_fraction",
        ],
    );
    let mut c = Table::new(
        format!("fig3c{s}"),
        &["group", "top_percent", "n_topics", "fraction", "n_focal"],
    );
    for g in groups(focal, &params.top_k) {
        for r in topics_vs_copub(g.members.iter().flat_map(|f| f.side(side))) {
            b.push(row![
                g.name,
                g.top_percent,
                r.bin_low,
                r.bin_high,
                r.n,
                r.fraction_single,
                r.se_fraction
            ]);
        }
        let stats = stats_at(&g.members, params.min_copub_high, |f| f.side(side));
        if let Some(dist) = pooled_topic_distribution(&stats) {
            for (k, v) in dist {
                c.push(row![g.name, g.top_percent, k, v, n_used(&stats)]);
            }
        }
    }
    report.add(b);
    report.add(c);
}

fn fig3_scatter(report: &mut StatReport, focal: &[FocalResult]) {
    let mut a = Table::new("fig3a", &["author_id", "paper_count", "mean_c10"]);
    for f in focal {
        a.push(row![f.author.as_str(), f.profile.paper_count, f.profile.mean_c10]);
    }
    report.add(a);
    let x: Vec<f64> = focal.iter().map(|f| Key::Productivity.value(f)).collect();
    let y: Vec<f64> = focal.iter().map(|f| Key::Impact.value(f)).collect();
    let mut corr = Table::new("fig3a_corr", &["statistic", "value", "n"]);
    corr.push(row!["pearson", pearson_r(&x, &y).ok().map(|r| r.value), x.len()]);
    report.add(corr);
}

fn decile_summary(
    name: &str,
    value_column: &str,
    focal: &[FocalResult],
    keys: &[Key],
    value: impl Fn(&FocalResult) -> Option<f64>,
) -> Table {
    let mut t = Table::new(name, &["key", "decile", "n_focal", value_column, "se"]);
    for &key in keys {
        let dec = decile_of(focal, key);
        for d in 0..10 {
            let values: Vec<f64> = focal
                .iter()
                .zip(&dec)
                .filter(|(_, &x)| x == d)
                .filter_map(|(f, _)| value(f))
                .collect();
            let (mean, se) = mean_and_se(&values);
            t.push(row![key.name(), d, values.len(), mean, se]);
        }
    }
    t
}

fn fig3_deciles(report: &mut StatReport, focal: &[FocalResult], params: &AnalysisParams) {
    let single: Vec<Option<f64>> = focal
        .iter()
        .map(|f| collaborator_stats_at(&f.collaborators, params.min_copub_high).fraction_single)
        .collect();
    let index: BTreeMap<&str, usize> = focal.iter().enumerate().map(|(i, f)| (f.author.as_str(), i)).collect();
    let single_of = |f: &FocalResult| single[index[f.author.as_str()]];

    for (name, key, control) in [
        ("fig3d", Key::Productivity, Key::Impact),
        ("fig3e", Key::Impact, Key::Productivity),
    ] {
        let mut t = decile_summary(name, "mean_fraction_single", focal, &[key], single_of);
        t.columns.remove(0);
        for r in &mut t.rows {
            r.remove(0);
        }
        report.add(t);

        // correlation with the key while the other variable is held within one decile
        let mut tau = Table::new(
            format!("{name}_tau"),
            &[&format!("{}_decile", control.name()), "tau", "n"],
        );
        let dec = decile_of(focal, control);
        let pairs = |d: Option<u32>| -> (Vec<f64>, Vec<f64>) {
            focal
                .iter()
                .zip(&dec)
                .filter(|(_, &x)| d.is_none_or(|d| d == x))
                .filter_map(|(f, _)| single_of(f).map(|s| (key.value(f), s)))
                .unzip()
        };
        for d in 0..10 {
            let (x, y) = pairs(Some(d));
            let (v, n) = tau_or_null(&x, &y);
            tau.push(row![d.to_string(), v, n]);
        }
        let (x, y) = pairs(None);
        let (v, n) = tau_or_null(&x, &y);
        tau.push(row!["all", v, n]);
        report.add(tau);
    }

    let mut f = Table::new(
        "fig3f",
        &[
            "group",
            "top_percent",
            "n_topics",
            "n_focal",
            "mean_fraction_single",
            "se",
        ],
    );
    for g in groups(focal, &params.top_k) {
        let mut by_topics: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for m in &g.members {
            if let Some(s) = single_of(m) {
                by_topics.entry(m.n_topics).or_default().push(s);
            }
        }
        for (k, values) in by_topics {
            let (mean, se) = mean_and_se(&values);
            f.push(row![g.name, g.top_percent, k, values.len(), mean, se]);
        }
    }
    report.add(f);
}

fn fig4(report: &mut StatReport, focal: &[FocalResult]) {
    let mut a = Table::new("fig4a", &["author_id", "q_real", "q_rand_mean", "ratio"]);
    for f in focal {
        match &f.q {
            Some(q) => a.push(row![f.author.as_str(), q.q_real, q.q_rand_mean, q.ratio]),
            None => a.push(row![f.author.as_str(), None::<f64>, None::<f64>, None::<f64>]),
        }
    }
    report.add(a);
    let jaccard_before = |f: &FocalResult| f.similarity.mean(SimilarityVariant::Before, SimilarityMetric::Jaccard);
    let means: Vec<f64> = focal.iter().filter_map(jaccard_before).collect();
    report.add(histogram(&means, 20, "fig4b"));
    report.add(decile_summary("fig4c", "mean_ratio", focal, &Key::ALL, |f| {
        f.q.and_then(|q| q.ratio)
    }));
    report.add(decile_summary(
        "fig4d",
        "mean_similarity",
        focal,
        &Key::ALL,
        jaccard_before,
    ));
}

fn join_table(name: &str, events: &[JoinEvent], binning: JoinBinning, params: &AnalysisParams) -> Table {
    let mut t = Table::new(
        name,
        &["bin_low", "bin_high", "mode", "probability", "ci_low", "ci_high", "n"],
    );
    for mode in JoinMode::ALL {
        if let Ok(rows) = join_probability(events, mode, binning, params.join_averaging) {
            for r in rows {
                t.push(row![
                    r.bin_low,
                    r.bin_high,
                    mode.name(),
                    r.probability,
                    r.ci_low,
                    r.ci_high,
                    r.candidates
                ]);
            }
        }
    }
    t
}

fn fig5(report: &mut StatReport, focal: &[FocalResult], params: &AnalysisParams) {
    let events: Vec<JoinEvent> = focal.iter().flat_map(|f| f.join_events.iter().cloned()).collect();
    report.add(join_table("fig5a", &events, JoinBinning::PastCopubLinear, params));
    report.add(join_table("fig5a_log", &events, JoinBinning::PastCopubLog, params));
    report.add(join_table("fig5b", &events, JoinBinning::PastMeanC10, params));
    let stage = JoinBinning::CareerStage {
        width: params.career_stage_width,
    };
    report.add(join_table("fig5e", &events, stage, params));

    for (name, covariate) in [
        ("fig5c", JoinCovariate::PastCopub),
        ("fig5d", JoinCovariate::PastMeanC10),
    ] {
        let mut t = Table::new(name, &["key", "decile", "mode", "tau", "n"]);
        for key in Key::ALL {
            let dec = decile_of(focal, key);
            for d in 0..10 {
                let members = focal.iter().zip(&dec).filter(|(_, &x)| x == d).map(|(f, _)| f);
                let events: Vec<&JoinEvent> = members.flat_map(|f| &f.join_events).collect();
                for mode in JoinMode::ALL {
                    let n: usize = events.iter().map(|e| e.counts(mode).1).sum();
                    let tau = join_covariate_tau(events.iter().copied(), mode, covariate)
                        .ok()
                        .map(|r| r.value);
                    t.push(row![key.name(), d, mode.name(), tau, n]);
                }
            }
        }
        report.add(t);
    }

    let width = params.career_stage_width;
    let mut by_stage: BTreeMap<i32, Vec<&JoinEvent>> = BTreeMap::new();
    for e in &events {
        by_stage.entry(e.career_year.div_euclid(width)).or_default().push(e);
    }
    let mut f = Table::new("fig5f", &["stage_low", "stage_high", "mode", "covariate", "tau", "n"]);
    for (stage, list) in by_stage {
        for mode in JoinMode::ALL {
            for (cov_name, cov) in [
                ("past_copub", JoinCovariate::PastCopub),
                ("past_mean_c10", JoinCovariate::PastMeanC10),
            ] {
                let n: usize = list.iter().map(|e| e.counts(mode).1).sum();
                let tau = join_covariate_tau(list.iter().copied(), mode, cov)
                    .ok()
                    .map(|r| r.value);
                f.push(row![stage * width, (stage + 1) * width, mode.name(), cov_name, tau, n]);
            }
        }
    }
    report.add(f);
}

/// Focal scientists grouped by the start of their career, in `cohort_width` bins.
fn cohorts(focal: &[FocalResult], width: i32) -> BTreeMap<i32, Vec<&FocalResult>> {
    let mut out: BTreeMap<i32, Vec<&FocalResult>> = BTreeMap::new();
    for f in focal {
        out.entry(f.cohort.start_year.div_euclid(width) * width)
            .or_default()
            .push(f);
    }
    out
}

fn fig6_cohorts(report: &mut StatReport, focal: &[FocalResult], params: &AnalysisParams, side: Side) {
    let s = side.suffix();
    let w = params.cohort_width;
    let mut a = Table::new(
        format!("fig6a{s}"),
        &["cohort_low", "cohort_high", "n_focal", "mean_fraction_single", "se"],
    );
    let mut inset = Table::new(
        format!("fig6a_copub{s}"),
        &[
            "cohort_low",
            "bin_low",
            "bin_high",
            "n",
            "fraction_single",
            "se_fraction",
        ],
    );
    for (start, members) in cohorts(focal, w) {
        let fractions = single_fractions(&stats_at(&members, params.min_copub, |f| f.cohort_side(side)));
        let (mean, se) = mean_and_se(&fractions);
        a.push(row![start, start + w, fractions.len(), mean, se]);
        for r in topics_vs_copub(members.iter().flat_map(|f| f.cohort_side(side))) {
            inset.push(row![
                start,
                r.bin_low,
                r.bin_high,
                r.n,
                r.fraction_single,
                r.se_fraction
            ]);
        }
    }
    report.add(a);
    report.add(inset);
}

fn fig6_disciplines(report: &mut StatReport, disciplines: &[DisciplineResults], params: &AnalysisParams, side: Side) {
    let s = side.suffix();
    let mut b = Table::new(format!("fig6b{s}"), &["discipline", "n_topics", "fraction", "n_focal"]);
    let mut inset = Table::new(
        format!("fig6b_copub{s}"),
        &[
            "discipline",
            "bin_low",
            "bin_high",
            "n",
            "fraction_single",
            "se_fraction",
        ],
    );
    for d in disciplines {
        let all: Vec<&FocalResult> = d.focal.iter().collect();
        let stats = stats_at(&all, params.min_copub, |f| f.side(side));
        if let Some(dist) = pooled_topic_distribution(&stats) {
            for (k, v) in dist {
                b.push(row![d.name.as_str(), k, v, n_used(&stats)]);
            }
        }
        for r in topics_vs_copub(d.focal.iter().flat_map(|f| f.side(side))) {
            inset.push(row![
                d.name.as_str(),
                r.bin_low,
                r.bin_high,
                r.n,
                r.fraction_single,
                r.se_fraction
            ]);
        }
    }
    report.add(b);
    report.add(inset);
}

/// Productive vs impactful comparison (top `cohort_top_k` percent) within
/// each cohort and each discipline.
fn fig6_groups(
    report: &mut StatReport,
    disciplines: &[DisciplineResults],
    focal: &[FocalResult],
    params: &AnalysisParams,
) {
    let k = params.cohort_top_k;
    let w = params.cohort_width;
    let high = params.min_copub_high;
    let mut c = Table::new(
        "fig6c",
        &[
            "cohort_low",
            "cohort_high",
            "group",
            "n_focal",
            "mean_fraction_single",
            "se",
        ],
    );
    let mut c_ks = Table::new(
        "fig6c_ks",
        &["cohort_low", "group_a", "group_b", "d", "p_value", "stars"],
    );
    for (start, members) in cohorts(focal, w) {
        let productive = top_group(&members, k, Key::Productivity, Key::cohort_value);
        let impactful = top_group(&members, k, Key::Impact, Key::cohort_value);
        let fp = single_fractions(&stats_at(&productive, high, |f| f.cohort_side(Side::Real)));
        let fi = single_fractions(&stats_at(&impactful, high, |f| f.cohort_side(Side::Real)));
        for (g, values) in [("productive", &fp), ("impactful", &fi)] {
            let (mean, se) = mean_and_se(values);
            c.push(row![start, start + w, g, values.len(), mean, se]);
        }
        let (d, p, stars) = ks_row(&fp, &fi);
        c_ks.push(row![start, "productive", "impactful", d, p, stars]);
    }
    report.add(c);
    report.add(c_ks);

    let mut d_table = Table::new(
        "fig6d",
        &["discipline", "group", "n_focal", "mean_fraction_single", "se"],
    );
    let mut d_ks = Table::new(
        "fig6d_ks",
        &["discipline", "group_a", "group_b", "d", "p_value", "stars"],
    );
    for disc in disciplines {
        let all: Vec<&FocalResult> = disc.focal.iter().collect();
        let productive = top_group(&all, k, Key::Productivity, Key::value);
        let impactful = top_group(&all, k, Key::Impact, Key::value);
        let fp = single_fractions(&stats_at(&productive, high, |f| f.side(Side::Real)));
        let fi = single_fractions(&stats_at(&impactful, high, |f| f.side(Side::Real)));
        for (g, values) in [("productive", &fp), ("impactful", &fi)] {
            let (mean, se) = mean_and_se(values);
            d_table.push(row![disc.name.as_str(), g, values.len(), mean, se]);
        }
        let (d, p, stars) = ks_row(&fp, &fi);
        d_ks.push(row![disc.name.as_str(), "productive", "impactful", d, p, stars]);
    }
    report.add(d_table);
    report.add(d_ks);
}

fn fig_s3(report: &mut StatReport, focal: &[FocalResult], params: &AnalysisParams) {
    let all: Vec<&FocalResult> = focal.iter().collect();
    let real = stats_at(&all, params.min_copub, |f| f.side(Side::Real));
    let shuffled = stats_at(&all, params.min_copub, |f| f.side(Side::Shuffled));
    let mut t = Table::new("figS3", &["n_topics", "d", "p_value", "stars", "n_real", "n_shuffled"]);
    for k in 1..=6 {
        let a: Vec<f64> = real
            .iter()
            .filter(|s| !s.is_empty())
            .map(|s| s.fraction_with(k))
            .collect();
        let b: Vec<f64> = shuffled
            .iter()
            .filter(|s| !s.is_empty())
            .map(|s| s.fraction_with(k))
            .collect();
        let (d, p, stars) = ks_row(&a, &b);
        t.push(row![k, d, p, stars, a.len(), b.len()]);
    }
    report.add(t);
}

fn fig_s4(report: &mut StatReport, focal: &[FocalResult]) {
    let spans = topic_span_stats(focal.iter().flat_map(|f| &f.collaborators));
    let n = spans.n_pairs;
    let frac = |c: usize| (n > 0).then(|| c as f64 / n as f64);
    let mut a = Table::new("figS4a", &["span_years", "count", "fraction"]);
    for (&span, &c) in &spans.spans {
        a.push(row![span, c, frac(c)]);
    }
    let mut b = Table::new("figS4b", &["papers", "count", "fraction"]);
    for (&papers, &c) in &spans.paper_counts {
        b.push(row![papers, c, frac(c)]);
    }
    report.add(a);
    report.add(b);
}

fn fig_s5(report: &mut StatReport, focal: &[FocalResult], params: &AnalysisParams) {
    let mut t = Table::new(
        "figS5",
        &["group", "top_percent", "n_focal", "mean_paper_count", "mean_c10"],
    );
    for g in groups(focal, &params.top_k) {
        let p: Vec<f64> = g.members.iter().map(|f| Key::Productivity.value(f)).collect();
        let i: Vec<f64> = g.members.iter().map(|f| Key::Impact.value(f)).collect();
        t.push(row![
            g.name,
            g.top_percent,
            g.members.len(),
            mean_and_se(&p).0,
            mean_and_se(&i).0
        ]);
    }
    report.add(t);
}

fn fig_s7(report: &mut StatReport, focal: &[FocalResult]) {
    let mut t = Table::new(
        "figS7",
        &["metric", "variant", "key", "decile", "n_focal", "mean_similarity", "se"],
    );
    for metric in SimilarityMetric::ALL {
        for variant in SimilarityVariant::ALL {
            let part = decile_summary("part", "mean", focal, &Key::ALL, |f| f.similarity.mean(variant, metric));
            for r in part.rows {
                let mut full = row![metric.name(), variant.name()];
                full.extend(r);
                t.push(full);
            }
        }
    }
    report.add(t);
}

/// Per-focal average of the initial-collaborator features.
fn feature_means(f: &FocalResult) -> [Option<f64>; 3] {
    let years: Vec<f64> = f.features.iter().map(|x| f64::from(x.past_career_years)).collect();
    let pubs: Vec<f64> = f.features.iter().map(|x| x.past_publications as f64).collect();
    let cites: Vec<f64> = f.features.iter().filter_map(|x| x.citations_per_past_paper).collect();
    [mean_and_se(&years).0, mean_and_se(&pubs).0, mean_and_se(&cites).0]
}

const FEATURES: [&str; 3] = ["past_career_years", "past_publications", "citations_per_past_paper"];

fn fig_s8(report: &mut StatReport, focal: &[FocalResult], params: &AnalysisParams) {
    let mut a = Table::new(
        "figS8a",
        &["group", "top_percent", "past_career_years", "count", "fraction"],
    );
    let mut b = Table::new(
        "figS8b",
        &["group", "top_percent", "past_publications", "count", "fraction"],
    );
    let mut c = Table::new(
        "figS8c",
        &["group", "top_percent", "bin_low", "bin_high", "count", "fraction"],
    );
    let groups = groups(focal, &params.top_k);
    for g in &groups {
        let feats = || g.members.iter().flat_map(|f| &f.features);
        let (dist, n) = count_distribution(feats().map(|x| x.past_career_years));
        for (v, count) in dist {
            a.push(row![g.name, g.top_percent, v, count, count as f64 / n as f64]);
        }
        let (dist, n) = count_distribution(feats().map(|x| x.past_publications));
        for (v, count) in dist {
            b.push(row![g.name, g.top_percent, v, count, count as f64 / n as f64]);
        }
        let bins = feats().filter_map(|x| x.citations_per_past_paper).map(|v| {
            let (lo, hi) = log2_bin(v);
            (lo as u64, hi as u64)
        });
        let (dist, n) = count_distribution(bins);
        for ((lo, hi), count) in dist {
            c.push(row![g.name, g.top_percent, lo, hi, count, count as f64 / n as f64]);
        }
    }
    report.add(a);
    report.add(b);
    report.add(c);

    let means: BTreeMap<&str, [Option<f64>; 3]> = focal.iter().map(|f| (f.author.as_str(), feature_means(f))).collect();
    for (i, name) in ["figS8d", "figS8e", "figS8f"].into_iter().enumerate() {
        report.add(decile_summary(name, "mean", focal, &Key::ALL, |f| {
            means[f.author.as_str()][i]
        }));
    }

    let mut s1 = Table::new(
        "tableS1",
        &["feature", "top_percent", "group_a", "group_b", "d", "p_value", "stars"],
    );
    let sample = |members: &[&FocalResult], i: usize| -> Vec<f64> {
        members.iter().filter_map(|f| means[f.author.as_str()][i]).collect()
    };
    let everyone = &groups[0].members;
    for pair in groups[1..].chunks(2) {
        let [productive, impactful] = pair else { continue };
        for (i, feature) in FEATURES.iter().enumerate() {
            for (ga, gb) in [
                (&groups[0], productive),
                (&groups[0], impactful),
                (productive, impactful),
            ] {
                let members_a = if ga.name == "all" { everyone } else { &ga.members };
                let (d, p, stars) = ks_row(&sample(members_a, i), &sample(&gb.members, i));
                s1.push(row![*feature, productive.top_percent, ga.name, gb.name, d, p, stars]);
            }
        }
    }
    report.add(s1);
}

fn note4(report: &mut StatReport, focal: &[FocalResult]) {
    let x: Vec<f64> = focal.iter().map(|f| f.profile.mean_c10).collect();
    let y: Vec<f64> = focal.iter().map(|f| f.n_topics as f64).collect();
    let mut t = Table::new("note4", &["statistic", "value", "n"]);
    t.push(row!["pearson", pearson_r(&x, &y).ok().map(|r| r.value), x.len()]);
    report.add(t);
}
