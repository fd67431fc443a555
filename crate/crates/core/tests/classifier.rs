mod common;

use csindex_core::classifier::{
    Metric, Tier, acceptance_rate, check_compliance, classification_report, classify_tier,
};
use csindex_core::registry::{ManualRank, Venue, VenueMetrics};
use proptest::prelude::*;

use common::fixture_registry;

fn venue(submitted: u32, accepted: u32, h5: u32, rank: ManualRank) -> Venue {
    Venue {
        venue_key: "v".into(),
        acronym: "V".into(),
        area_id: "se".into(),
        sponsor: "-".into(),
        metrics: VenueMetrics {
            submitted,
            accepted,
            h5_index: h5,
        },
        min_pages: 10,
        manual_rank: rank,
        stated_acceptance_rate: None,
    }
}

// Oracle: exact rational comparison, no rounding involved.
fn rate_cmp(a1: u32, s1: u32, a2: u32, s2: u32) -> std::cmp::Ordering {
    (u64::from(a1) * u64::from(s2)).cmp(&(u64::from(a2) * u64::from(s1)))
}

#[test]
fn printed_rates_recompute_except_issre() {
    let r = fixture_registry();
    let mut off = Vec::new();
    for v in &r.venues {
        let got = acceptance_rate(v.metrics.submitted, v.metrics.accepted).unwrap();
        let printed = v.stated_acceptance_rate.unwrap();
        // 0.05 tolerance, in tenths.
        if got.abs_diff(printed) * 2 > 1 {
            off.push((v.acronym.clone(), got.to_string(), printed.to_string()));
        }
    }
    assert_eq!(
        off,
        [("ISSRE".to_string(), "31.2".to_string(), "31.5".to_string())]
    );
}

#[test]
fn rounding_is_half_up_to_one_decimal() {
    // 1/8 = 12.5 exactly; 1/16 = 6.25 -> 6.3; 1/3 = 33.33 -> 33.3; 2/3 = 66.67 -> 66.7
    assert_eq!(acceptance_rate(8, 1).unwrap().to_string(), "12.5");
    assert_eq!(acceptance_rate(16, 1).unwrap().to_string(), "6.3");
    assert_eq!(acceptance_rate(3, 1).unwrap().to_string(), "33.3");
    assert_eq!(acceptance_rate(3, 2).unwrap().to_string(), "66.7");
    assert_eq!(acceptance_rate(121, 37).unwrap().to_string(), "30.6");
}

#[test]
fn undefined_and_impossible_rates_are_errors() {
    assert!(acceptance_rate(0, 0).is_err());
    assert!(acceptance_rate(10, 11).is_err());
}

#[test]
fn acceptance_rate_monotonicity_brute_force() {
    // The displayed rate is rounded, so strictness is checked on the exact
    // value and non-strictness on the rounded one.
    for s in 1..=300u32 {
        let mut prev = None;
        for a in 0..=s {
            let r = acceptance_rate(s, a).unwrap();
            if let Some(p) = prev {
                assert!(r >= p, "rate decreased at {a}/{s}");
                assert_eq!(rate_cmp(a - 1, s, a, s), std::cmp::Ordering::Less);
            }
            prev = Some(r);
            if s > 1 && a < s {
                let fewer = acceptance_rate(s - 1, a).unwrap();
                assert!(fewer >= r, "rate increased with submitted at {a}/{s}");
                if a > 0 {
                    assert_eq!(rate_cmp(a, s, a, s - 1), std::cmp::Ordering::Less);
                }
            }
        }
    }
}

#[test]
fn submitted_flag_is_monotone_in_submitted() {
    for s in 1..300u32 {
        let lo = check_compliance(&venue(s, 0, 30, ManualRank::None)).unwrap();
        let hi = check_compliance(&venue(s + 1, 0, 30, ManualRank::None)).unwrap();
        assert!(!lo.submitted_ok || hi.submitted_ok);
    }
}

#[test]
fn thresholds_are_strict() {
    let f = check_compliance(&venue(100, 10, 20, ManualRank::None)).unwrap();
    assert!(!f.submitted_ok && !f.h5_ok);
    let f = check_compliance(&venue(101, 10, 21, ManualRank::None)).unwrap();
    assert!(f.submitted_ok && f.h5_ok);
    // exactly 30%
    assert!(
        !check_compliance(&venue(110, 33, 30, ManualRank::None))
            .unwrap()
            .acceptance_ok
    );
    // 29.96% passes and 30.04% fails; neither is decided by rounding
    assert!(
        check_compliance(&venue(2503, 750, 30, ManualRank::None))
            .unwrap()
            .acceptance_ok
    );
    assert!(
        !check_compliance(&venue(2497, 750, 30, ManualRank::None))
            .unwrap()
            .acceptance_ok
    );
}

#[test]
fn top_gate_is_strict_and_needs_manual_rank() {
    assert_eq!(
        classify_tier(&venue(181, 10, 41, ManualRank::Top)).unwrap(),
        Tier::Top
    );
    assert!(classify_tier(&venue(180, 10, 41, ManualRank::Top)).is_err());
    assert!(classify_tier(&venue(181, 10, 40, ManualRank::Top)).is_err());
    assert_eq!(
        classify_tier(&venue(181, 10, 41, ManualRank::None)).unwrap(),
        Tier::Standard
    );
    assert_eq!(
        classify_tier(&venue(50, 10, 5, ManualRank::NearTheTop)).unwrap(),
        Tier::NearTheTop
    );
}

#[test]
fn se_table_tiers() {
    let report = classification_report(&fixture_registry()).unwrap();
    for row in &report.rows {
        let want = match row.acronym.as_str() {
            "ICSE" | "FSE" => Tier::Top,
            "ASE" => Tier::NearTheTop,
            _ => Tier::Standard,
        };
        assert_eq!(row.tier, want, "{}", row.acronym);
    }
}

#[test]
fn report_surfaces_issre_discrepancy() {
    let report = classification_report(&fixture_registry()).unwrap();
    let flagged: Vec<_> = report
        .rows
        .iter()
        .filter(|r| r.rate_discrepancy)
        .map(|r| r.acronym.as_str())
        .collect();
    assert_eq!(flagged, ["ISSRE"]);
    assert!(
        report
            .warnings
            .iter()
            .any(|w| w.contains("ISSRE") && w.contains("31.5") && w.contains("31.2"))
    );
    let issre = report.row("issre").unwrap();
    assert!(!issre.flags.acceptance_ok);
}

#[test]
fn strict_rules_on_se_table() {
    // What the printed thresholds give on the transcribed numbers, computed
    // here independently of the classifier.
    let r = fixture_registry();
    let report = classification_report(&r).unwrap();
    for (v, row) in r.venues.iter().zip(&report.rows) {
        let m = v.metrics;
        assert_eq!(row.flags.submitted_ok, m.submitted > 100, "{}", v.acronym);
        assert_eq!(
            row.flags.acceptance_ok,
            100 * m.accepted < 30 * m.submitted,
            "{}",
            v.acronym
        );
        assert_eq!(row.flags.h5_ok, m.h5_index > 20, "{}", v.acronym);
    }
    let icsa = report.row("icsa").unwrap();
    assert_eq!(icsa.exceptions(), [Metric::Submitted, Metric::H5Index]);
}

#[test]
fn empty_registry_gives_empty_report() {
    let mut r = fixture_registry();
    r.venues.clear();
    assert!(classification_report(&r).unwrap().rows.is_empty());
}

proptest! {
    #[test]
    fn flags_complete(s in 1u32..400, frac in 0.0f64..=1.0, h5 in 0u32..80) {
        let a = ((f64::from(s) * frac) as u32).min(s);
        let f = check_compliance(&venue(s, a, h5, ManualRank::None)).unwrap();
        let satisfies = s > 100 && 100 * a < 30 * s && h5 > 20;
        prop_assert_eq!(f.all_ok(), satisfies);
        prop_assert_eq!(f.exceptions().is_empty(), satisfies);
    }

    #[test]
    fn tier_top_implies_gate(s in 1u32..400, h5 in 0u32..80, rank in 0usize..3) {
        let rank = [ManualRank::None, ManualRank::Top, ManualRank::NearTheTop][rank];
        if let Ok(Tier::Top) = classify_tier(&venue(s, 0, h5, rank)) {
            prop_assert!(s > 180 && h5 > 40);
        }
    }
}
