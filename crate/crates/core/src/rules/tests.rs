use super::*;

const FIVE_HYPOTHESES: &str = "\
frame E = { e1, e2, e3 }
frame H = { a1, a2, a3, a4, a5 }
map R : E -> H {
  e1 -> {a1,a2}: 0.7, {a3,a4}: 0.3 ;
  e2 -> {a2,a3}: 0.8, * : 0.2 ;
  e3 -> {a4,a5}: 0.9, * : 0.1 ;
}
";

const SMOKE: &str = "rule alarm_rings -> fire: 0.9 ;\n";

fn only(text: &str) -> RuleSet {
    parse_rules(text).unwrap().single_map().unwrap().clone()
}

#[test]
fn five_hypotheses_is_complete() {
    let rs = only(FIVE_HYPOTHESES);
    assert!(rs.is_complete());
    assert_eq!(rs.rules().len(), 3);
    assert_eq!(rs.source().len(), 3);
    assert_eq!(rs.target().len(), 5);
    let g = ruleset_to_mapping(&rs).unwrap();
    let h = rs.target();
    assert_eq!(
        g.image(0),
        &[
            (h.subset(["a1", "a2"]).unwrap(), 0.7),
            (h.subset(["a3", "a4"]).unwrap(), 0.3)
        ]
    );
    assert_eq!(g.image(2)[1], (h.full(), 0.1));
}

#[test]
fn smoke_alarm_is_incomplete_everywhere() {
    let rs = only(SMOKE);
    let report = classify_completeness(&rs);
    assert!(report.antecedents_not_a_frame);
    assert!(report.conclusions_not_a_frame);
    assert_eq!(
        report.deficient_rules,
        vec![("alarm_rings".to_string(), 0.9)]
    );
    assert_eq!(report.reasons().len(), 3);
}

#[test]
fn only_the_deficient_rule_is_reported() {
    let text = FIVE_HYPOTHESES.replace("e3 -> {a4,a5}: 0.9, * : 0.1 ;", "e3 -> {a4,a5}: 0.9 ;");
    let report = only(&text).completeness();
    assert!(!report.antecedents_not_a_frame && !report.conclusions_not_a_frame);
    assert_eq!(report.deficient_rules.len(), 1);
    assert_eq!(report.deficient_rules[0].0, "e3");
    assert!((report.deficient_rules[0].1 - 0.9).abs() < 1e-12);
}

#[test]
fn smoke_alarm_completion() {
    let (done, e, h) = complete_ruleset(&only(SMOKE)).unwrap();
    assert_eq!(e.elements(), ["alarm_rings", "!alarm_rings"]);
    assert_eq!(h.elements(), ["fire", "!fire"]);
    assert!(done.is_complete());
    let r1 = &done.rules()[0];
    assert_eq!(r1.antecedent, e.singleton(0));
    assert_eq!(
        r1.conclusions,
        vec![
            Conclusion {
                target: Target::Set(h.singleton(0)),
                strength: 0.9
            },
            Conclusion {
                target: Target::Whole,
                strength: 0.1
            },
        ]
    );
    let r2 = &done.rules()[1];
    assert_eq!(r2.antecedent, e.singleton(1));
    assert_eq!(
        r2.conclusions,
        vec![Conclusion {
            target: Target::Whole,
            strength: 1.0
        }]
    );

    let g = ruleset_to_mapping(&done).unwrap();
    assert_eq!(g.image(0), &[(h.singleton(0), 0.9), (h.full(), 0.1)]);
    assert_eq!(g.image(1), &[(h.full(), 1.0)]);
}

#[test]
fn completion_is_identity_on_complete_sets() {
    let rs = only(FIVE_HYPOTHESES);
    let (done, e, h) = complete_ruleset(&rs).unwrap();
    assert_eq!(done, rs);
    assert_eq!(&e, rs.source());
    assert_eq!(&h, rs.target());
}

#[test]
fn padding_with_declared_frames() {
    let rs = only("frame E = { e1 }\nframe H = { h1, h2 }\nmap R : E -> H { e1 -> h1: 0.4 ; }\n");
    let (done, _, h) = complete_ruleset(&rs).unwrap();
    assert_eq!(
        done.rules()[0].conclusions,
        vec![
            Conclusion {
                target: Target::Set(h.singleton(0)),
                strength: 0.4
            },
            Conclusion {
                target: Target::Whole,
                strength: 0.6
            },
        ]
    );
}

#[test]
fn padding_merges_into_an_existing_whole_term() {
    let rs = only(
        "frame E = { e1 }\nframe H = { h1, h2 }\nmap R : E -> H { e1 -> h1: 0.3, *: 0.1 ; }\n",
    );
    let (done, _, _) = complete_ruleset(&rs).unwrap();
    assert_eq!(done.rules()[0].conclusions[1].strength, 0.7);
    assert_eq!(done.rules()[0].conclusions.len(), 2);
}

#[test]
fn completing_twice_changes_nothing() {
    let (once, _, _) = complete_ruleset(&only(SMOKE)).unwrap();
    let (twice, _, _) = complete_ruleset(&once).unwrap();
    assert_eq!(once, twice);
}

#[test]
fn implicit_rules_find_declared_frames() {
    let text = "frame E = { e1, e2 }\nframe H = { h1, h2 }\ne1 -> h1: 1 ;\ne2 -> * : 1 ;\n";
    let rs = only(text);
    assert!(rs.is_complete());
    assert_eq!(rs.name(), IMPLICIT_MAP);
    assert_eq!(rs.source().name(), "E");
}

#[test]
fn parse_errors() {
    let err = |t: &str| parse_rules(t).unwrap_err();
    assert!(matches!(
        err("a -> x: 0.7, y: 0.4 ;"),
        Error::StrengthSumExceeded { total, .. } if (total - 1.1).abs() < 1e-12
    ));
    assert!(matches!(
        err("a -> x: 0 ;"),
        Error::StrengthOutOfRange { .. }
    ));
    assert!(matches!(
        err("a -> x: 1.5 ;"),
        Error::StrengthOutOfRange { .. }
    ));
    assert!(
        matches!(err("a -> x: 0.5 ;\na -> y: 0.5 ;"), Error::DuplicateAntecedent { location, .. } if location.line == 2)
    );
    assert!(matches!(
        err("a -> x: 0.5, x: 0.5 ;"),
        Error::DuplicateConclusion { .. }
    ));
    assert!(matches!(
        err("frame E = { e1 }\nframe H = { h }\nmap R : E -> H { e2 -> h: 1 ; }"),
        Error::UnknownLabelAt {
            location: Location {
                line: 3,
                column: 18
            },
            ..
        }
    ));
    assert!(matches!(err("frame E = { a, a }"), Error::Semantic { .. }));
    assert!(matches!(err("frame P = A * B"), Error::Semantic { .. }));
    assert!(matches!(err("a -> * : 1 ;"), Error::Semantic { .. }));
}

#[test]
fn missing_rule_is_an_error() {
    let rs = only("frame E = { e1, e2 }\nframe H = { h }\nmap R : E -> H { e1 -> h: 1 ; }\n");
    assert!(rs.is_complete());
    assert!(
        matches!(ruleset_to_mapping(&rs), Err(Error::MissingRule { element, .. }) if element == "e2")
    );
}

#[test]
fn completion_covers_declared_elements_without_rules() {
    let rs = only("frame W = { sun, rain, snow }\nrule sun -> dry: 0.8 ;\n");
    let (done, source, _) = complete_ruleset(&rs).unwrap();
    assert_eq!(source.elements(), ["sun", "rain", "snow"]);
    let antecedents: Vec<&str> = done
        .rules()
        .iter()
        .map(|r| r.antecedent.labels()[0])
        .collect();
    assert_eq!(antecedents, ["sun", "rain", "snow"]);
    assert_eq!(done.rules()[2].conclusions[0].target, Target::Whole);
    assert!(ruleset_to_mapping(&done).is_ok());
}

#[test]
fn incomplete_sets_do_not_convert() {
    assert!(matches!(
        ruleset_to_mapping(&only(SMOKE)),
        Err(Error::IncompleteRuleSet(_))
    ));
}

#[test]
fn subset_antecedents_become_explicit_rows() {
    let text = "frame E = { e1, e2 }\nframe H = { a, b }\nmap R : E -> H {\n  e1 -> a: 0.6, * : 0.4 ;\n  e2 -> a: 0.2, * : 0.8 ;\n  {e1,e2} -> a: 0.5, * : 0.5 ;\n}\n";
    let g = ruleset_to_mapping(&only(text)).unwrap();
    let row = g.cem_row(&g.source().full()).unwrap();
    assert_eq!(row.mass_of(&g.target().singleton(0)), 0.5);

    let bad = text.replace("{e1,e2} -> a: 0.5, * : 0.5", "{e1,e2} -> a: 0.7, * : 0.3");
    assert!(matches!(
        ruleset_to_mapping(&only(&bad)),
        Err(Error::AverageBound { .. })
    ));
}

#[test]
fn ginsberg_and_hau_kashyap() {
    let g = from_ginsberg("E", "H", 0.6, 0.2).unwrap();
    let strengths: Vec<f64> = g
        .rules()
        .iter()
        .flat_map(|r| r.conclusions.iter().map(|c| c.strength))
        .collect();
    assert_eq!(strengths, vec![0.6, 0.2, 0.2, 1.0]);
    assert!(g.is_complete());

    let hk = from_hau_kashyap("E", "H", 0.6, 0.8).unwrap();
    assert_eq!(hk, g);

    let certain = from_ginsberg("E", "H", 1.0, 0.0).unwrap();
    assert_eq!(certain.rules()[0].conclusions.len(), 1);
    let tight = from_hau_kashyap("E", "H", 0.5, 0.5).unwrap();
    assert!(tight.rules()[0]
        .conclusions
        .iter()
        .all(|c| c.target != Target::Whole));

    assert!(matches!(
        from_ginsberg("E", "H", 0.7, 0.5),
        Err(Error::InvalidConversion(_))
    ));
    assert!(matches!(
        from_hau_kashyap("E", "H", 0.9, 0.4),
        Err(Error::InvalidConversion(_))
    ));
}

#[test]
fn mapping_round_trip_keeps_nine_digit_sums() {
    let rs = only(FIVE_HYPOTHESES);
    let g = ruleset_to_mapping(&rs).unwrap();
    assert_eq!(mapping_to_ruleset(&g), rs);

    let e = Frame::new("E", ["e"]).unwrap();
    let h = Frame::new("H", ["x", "y", "z"]).unwrap();
    let third = 1.0 / 3.0;
    let g = EvidentialMapping::new(
        "g",
        &e,
        &h,
        vec![vec![
            (h.singleton(0), third),
            (h.singleton(1), third),
            (h.singleton(2), third),
        ]],
    )
    .unwrap();
    let rs = mapping_to_ruleset(&g);
    let units: i64 = rs.rules()[0]
        .conclusions
        .iter()
        .map(|c| (c.strength * 1e9).round() as i64)
        .sum();
    assert_eq!(units, 1_000_000_000);
    assert!(ruleset_to_mapping(&rs).is_ok());
}

#[test]
fn render_five_hypotheses() {
    let text = render_ruleset(&only(FIVE_HYPOTHESES));
    assert_eq!(
        text,
        "frame E = { e1, e2, e3 }\nframe H = { a1, a2, a3, a4, a5 }\n\nmap R : E -> H {\n  e1 -> {a1,a2}: 0.7, {a3,a4}: 0.3 ;\n  e2 -> {a2,a3}: 0.8, * : 0.2 ;\n  e3 -> {a4,a5}: 0.9, * : 0.1 ;\n}\n"
    );
    assert_eq!(only(&text), only(FIVE_HYPOTHESES));
}

#[test]
fn render_completed_smoke_alarm() {
    let (done, _, _) = complete_ruleset(&only(SMOKE)).unwrap();
    let text = render_ruleset(&done);
    assert_eq!(
        text,
        "frame E = { alarm_rings, !alarm_rings }\nframe H = { fire, !fire }\n\nmap R : E -> H {\n  alarm_rings -> fire: 0.9, * : 0.1 ;\n  !alarm_rings -> * : 1 ;\n}\n"
    );
    let back = only(&text);
    assert_eq!(back, done);
    assert!(back.is_complete());
}

#[test]
fn incomplete_sets_render_without_frames() {
    let rs = only(SMOKE);
    let text = render_ruleset(&rs);
    assert_eq!(text, "map R : E -> H {\n  alarm_rings -> fire: 0.9 ;\n}\n");
    assert_eq!(only(&text), rs);
}

#[test]
fn product_frames_and_evidence_round_trip() {
    let text = "frame A = { a1, a2 }\nframe B = { b1, b2 }\nframe P = A * B\nframe H = { h1, h2 }\n\nmap G : P -> H {\n  (a1,b1) -> h1: 1 ;\n  (a1,b2) -> h1: 0.5, h2: 0.5 ;\n  (a2,b1) -> h2: 1 ;\n  (a2,b2) -> * : 1 ;\n}\n\nevidence on A { {a1}: 0.6 ; * : 0.4 ; }\n";
    let file = parse_rules(text).unwrap();
    assert_eq!(render_file(&file), text);
    let p = file.frame("P").unwrap();
    assert!(p.is_product());
    assert_eq!(p.len(), 4);
    let m = file.evidence[0]
        .to_mass(file.frame("A").unwrap(), false)
        .unwrap();
    assert_eq!(m.mass(&file.frame("A").unwrap().singleton(0)), 0.6);
}

#[test]
fn evidence_normalization() {
    let file =
        parse_rules("frame E = { e1, e2 }\nevidence on E { {e1}: 0.5 ; {e2}: 0.45 ; }\n").unwrap();
    let e = file.frame("E").unwrap();
    let ev = &file.evidence[0];
    assert!(matches!(
        ev.to_mass(e, false),
        Err(Error::NotNormalized { .. })
    ));
    let m = ev.to_mass(e, true).unwrap();
    assert!((m.mass(&e.singleton(0)) - 0.5 / 0.95).abs() < 1e-15);

    let far = parse_rules("frame E = { e1, e2 }\nevidence on E { {e1}: 0.5 ; }\n").unwrap();
    assert!(far.evidence[0].to_mass(e, true).is_err());
    let unknown = parse_rules("evidence on E { {zz}: 1 ; }\n").unwrap();
    assert!(matches!(
        unknown.evidence[0].to_mass(e, false),
        Err(Error::UnknownLabelAt { .. })
    ));
}
