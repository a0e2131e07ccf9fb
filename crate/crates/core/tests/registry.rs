use drsrd_core::{AttributeValue, Repository, ResourceRecord, Taxonomy};
use proptest::prelude::*;

const TAX: &str = "class R\nclass S parent R\n\
                   property name type text class R\nproperty count type int class S\n\
                   property size type long class S\nproperty speed type real class S\n";

fn value_for(kind: usize) -> BoxedStrategy<AttributeValue> {
    let null = Just(AttributeValue::Null);
    match kind {
        // awkward characters exercise the escaping
        0 => prop_oneof![null, "[a-z%;=\t\r\n é]{1,8}".prop_map(AttributeValue::text)].boxed(),
        1 => prop_oneof![null, any::<i32>().prop_map(AttributeValue::Int)].boxed(),
        2 => prop_oneof![null, any::<i64>().prop_map(AttributeValue::Long)].boxed(),
        _ => prop_oneof![null, (-1e9f64..1e9).prop_map(|v| AttributeValue::real(v).unwrap())].boxed(),
    }
}

fn record() -> impl Strategy<Value = ResourceRecord> {
    let names = ["name", "count", "size", "speed"];
    (
        "[a-z0-9;=%\t]{1,6}",
        proptest::sample::subsequence(vec![0usize, 1, 2, 3], 0..=4).prop_shuffle(),
    )
        .prop_flat_map(move |(id, kinds)| {
            let values: Vec<_> = kinds.iter().map(|&k| value_for(k).prop_map(move |v| (names[k], v))).collect();
            (Just(id), values)
        })
        .prop_map(|(id, values)| ResourceRecord::new(id, values).unwrap())
}

fn records() -> impl Strategy<Value = Vec<ResourceRecord>> {
    proptest::collection::vec(record(), 0..6).prop_map(|mut rs| {
        let mut seen = std::collections::HashSet::new();
        rs.retain(|r| seen.insert(r.id().clone()));
        rs
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn save_then_load_round_trips(rs in records()) {
        let tax = Taxonomy::parse(TAX).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("repo.tsv");
        let repo = Repository::in_memory(rs).unwrap().with_path(&path);
        repo.save().unwrap();
        let loaded = Repository::load(&path, &tax).unwrap();
        prop_assert_eq!(loaded.records(), repo.records());
    }

    #[test]
    fn register_then_deregister_restores_the_file(rs in records(), extra in record()) {
        let tax = Taxonomy::parse(TAX).unwrap();
        prop_assume!(rs.iter().all(|r| r.id() != extra.id()));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("repo.tsv");
        Repository::in_memory(rs).unwrap().with_path(&path).save().unwrap();
        let before = std::fs::read(&path).unwrap();
        let repo = Repository::load(&path, &tax).unwrap();
        let id = extra.id().to_string();
        let grown = repo.register(&tax, extra).unwrap();
        prop_assert_eq!(grown.len(), repo.len() + 1);
        let back = grown.deregister(&tax, &id).unwrap();
        prop_assert_eq!(back.records(), repo.records());
        prop_assert_eq!(std::fs::read(&path).unwrap(), before);
    }

    #[test]
    fn information_table_is_total(rs in records()) {
        let repo = Repository::in_memory(rs).unwrap();
        let names = ["name", "count", "size", "speed"];
        let table = repo.to_information_table(&names).unwrap();
        prop_assert_eq!(table.universe_len(), repo.len());
        for (o, r) in repo.records().iter().enumerate() {
            for (c, n) in names.iter().enumerate() {
                let want = r.get(n).cloned().unwrap_or(AttributeValue::Null);
                prop_assert_eq!(table.value(o, c), &want);
            }
        }
    }
}

#[test]
fn deregistering_an_unknown_id_fails_and_leaves_the_file() {
    let tax = Taxonomy::parse(TAX).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("repo.tsv");
    let repo = Repository::open_or_create(&path, &tax).unwrap();
    let repo = repo
        .register(&tax, ResourceRecord::new("a", vec![("count", AttributeValue::Int(2))]).unwrap())
        .unwrap();
    let before = std::fs::read(&path).unwrap();
    assert!(repo.deregister(&tax, "b").is_err());
    assert_eq!(std::fs::read(&path).unwrap(), before);
}
