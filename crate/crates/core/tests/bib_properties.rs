use crate2bib::bib::{escape_bibtex, parse_entry, BibEntry, CANONICAL_FIELD_ORDER};
use proptest::prelude::*;

fn field_name() -> impl Strategy<Value = String> {
    prop_oneof![
        prop::sample::select(CANONICAL_FIELD_ORDER.to_vec()).prop_map(String::from),
        "[a-z][a-z0-9_-]{0,10}",
    ]
}

fn fields() -> impl Strategy<Value = Vec<(String, String)>> {
    prop::collection::btree_map(field_name(), "\\PC{0,30}", 0..10)
        .prop_map(|m| m.into_iter().collect::<Vec<_>>())
        .prop_shuffle()
}

proptest! {
    #[test]
    fn insertion_order_does_not_change_bytes(fields in fields()) {
        let mut forward = BibEntry::new("software", "K").unwrap();
        let mut backward = BibEntry::new("software", "K").unwrap();
        for (n, v) in &fields {
            forward.set_text(n, v).unwrap();
        }
        for (n, v) in fields.iter().rev() {
            backward.set_text(n, v).unwrap();
        }
        prop_assert_eq!(forward.to_bibtex(), backward.to_bibtex());
    }

    #[test]
    fn different_values_serialize_differently(
        fields in fields(),
        other in "\\PC{0,30}",
        pick in any::<prop::sample::Index>(),
    ) {
        prop_assume!(!fields.is_empty());
        let (name, value) = &fields[pick.index(fields.len())];
        prop_assume!(*value != other);
        let mut a = BibEntry::new("misc", "K").unwrap();
        for (n, v) in &fields {
            a.set_text(n, v).unwrap();
        }
        let mut b = a.clone();
        b.set_text(name, &other).unwrap();
        prop_assert_ne!(a.to_bibtex(), b.to_bibtex());
    }

    #[test]
    fn nested_braces_reach_a_fixpoint(depth in 0usize..6, inner in "[a-z ]{0,8}") {
        let mut value = escape_bibtex(&inner);
        for i in 0..depth {
            value = if i % 2 == 0 { format!("{{{value}}}") } else { format!("x {{{value}}} y") };
        }
        let mut e = BibEntry::new("article", "Nest1").unwrap();
        e.set("title", value.clone()).unwrap();
        let once = e.to_bibtex();
        let parsed = parse_entry(&once).unwrap();
        prop_assert_eq!(parsed.get("title"), Some(value.as_str()));
        prop_assert_eq!(parsed.to_bibtex(), once);
    }
}
