use std::collections::BTreeSet;

use proptest::prelude::*;

use collabtopics::config::AnalysisParams;
use collabtopics::decompose::decompose_bipartite;
use collabtopics::ingest::{load_corpus, select_focal, InputFormat, ValidationConfig};
use collabtopics::nullmodel::AuthorshipBipartite;
use collabtopics::pipeline::{detect_focal_topics, shuffle_focal};
use collabtopics::synth::{generate, SynthSpec};
use collabtopics::topic::{read_series_csv, write_series_csv};

fn small_spec(seed: u64, topics: usize, multi: f64) -> SynthSpec {
    SynthSpec {
        n_focal: 2,
        topics_per_focal: topics,
        multi_topic_fraction: multi,
        seed,
        ..SynthSpec::default()
    }
}

#[test]
fn written_corpus_loads_back_identically() {
    let dir = tempfile::tempdir().unwrap();
    let synth = generate(&small_spec(1, 3, 0.3)).unwrap();
    synth.write(dir.path()).unwrap();
    let file = std::fs::File::open(dir.path().join("corpus.jsonl")).unwrap();
    let config = ValidationConfig {
        strict: true,
        ..ValidationConfig::default()
    };
    let loaded = load_corpus(file, InputFormat::Jsonl, &config).unwrap();
    assert!(loaded.rejections.is_empty());
    assert_eq!(loaded.corpus.checksum(), synth.corpus.checksum());
    assert!(dir.path().join("ground_truth.json").exists());
}

#[test]
fn every_focal_scientist_passes_the_default_filter() {
    let synth = generate(&SynthSpec::default()).unwrap();
    assert_eq!(select_focal(&synth.corpus, 50), synth.truth.focal);
}

#[test]
fn detected_involvement_matches_planted_involvement() {
    let synth = generate(&small_spec(2, 4, 0.3)).unwrap();
    let params = AnalysisParams::default();
    let (mut matched, mut total) = (0, 0);
    for focal in &synth.truth.focal {
        let topics = detect_focal_topics(&synth.corpus, focal, &params).unwrap();
        let bip = AuthorshipBipartite::from_series(&synth.corpus, focal, &topics.series).unwrap();
        for c in decompose_bipartite(&bip, &topics.series, params.decompose_options()) {
            let planted = &synth.truth.collaborator_topics[focal][&c.collaborator];
            total += 1;
            matched += usize::from(planted.len() == c.n_topics_involved());
        }
    }
    assert!(total > 0);
    assert!(matched as f64 >= 0.95 * total as f64, "{matched}/{total}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn copublication_total_equals_coauthor_slots(seed in 0u64..10_000, topics in 2usize..5, multi in 0.0f64..1.0) {
        let synth = generate(&small_spec(seed, topics, multi)).unwrap();
        let params = AnalysisParams { seed, ..AnalysisParams::default() };
        for focal in &synth.truth.focal {
            let t = detect_focal_topics(&synth.corpus, focal, &params).unwrap();
            let bip = AuthorshipBipartite::from_series(&synth.corpus, focal, &t.series).unwrap();
            let list = decompose_bipartite(&bip, &t.series, params.decompose_options());
            let slots: usize = synth.corpus.author_papers(focal).unwrap().iter()
                .map(|&i| synth.corpus.paper(i).author_ids.len() - 1)
                .sum();
            prop_assert_eq!(list.iter().map(|c| c.n_copub()).sum::<usize>(), slots);
            for c in &list {
                let ids: BTreeSet<&str> = c.papers.iter().map(|p| p.paper_id.as_str()).collect();
                prop_assert_eq!(ids.len(), c.n_copub());
                prop_assert!(c.papers.windows(2).all(|w| w[0].year <= w[1].year));
            }
        }
    }

    #[test]
    fn exported_artifacts_round_trip(seed in 0u64..10_000) {
        let synth = generate(&small_spec(seed, 3, 0.3)).unwrap();
        let params = AnalysisParams { seed, ..AnalysisParams::default() };
        let focal = &synth.truth.focal[0];
        let t = detect_focal_topics(&synth.corpus, focal, &params).unwrap();
        let mut buf = Vec::new();
        write_series_csv(&mut buf, &t.series).unwrap();
        let series = read_series_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(&series, &t.series);

        let shuffled = shuffle_focal(&synth.corpus, focal, &series, &params).unwrap();
        let mut links = Vec::new();
        shuffled.write_links_csv(&mut links).unwrap();
        let back = AuthorshipBipartite::read_links_csv(focal, &series, links.as_slice()).unwrap();
        prop_assert_eq!(back, shuffled);
    }
}
