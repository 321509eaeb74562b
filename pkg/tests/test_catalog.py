from hearth.catalog import ObjectClassCatalog, default_catalog


def test_exactly_102_interactable_categories(catalog):
    assert len(catalog.interactable_categories()) == 102


def test_bread_has_30_variants(catalog):
    assert catalog.get("Bread").num_variants == 30


def test_catalog_internally_consistent(catalog):
    assert catalog.validate() == []


def test_pickupable_implies_movable(catalog):
    for cls in catalog.classes.values():
        if cls.pickupable:
            assert cls.movable, cls.category


def test_affordance_fields_present(catalog):
    for cls in catalog.classes.values():
        if cls.openable:
            assert cls.open_extents is not None, cls.category
        if cls.receptacle:
            assert cls.interior_extents is not None, cls.category
            assert cls.closed_extents.contains_box(cls.interior_extents, 1e-9), cls.category
        if cls.sliceable:
            assert cls.slice_count and cls.slice_count >= 1, cls.category
            assert f"{cls.category}Sliced" in catalog, cls.category
            piece = catalog.get(f"{cls.category}Sliced")
            assert piece.pickupable and not piece.sliceable, piece.category


def test_sliced_rows_fit_in_source_footprint(catalog):
    """Worst-case variant scales: a row of slices stays inside the source
    box, so slicing can never create interpenetration."""
    for cls in catalog.classes.values():
        if not cls.sliceable:
            continue
        piece = catalog.get(f"{cls.category}Sliced")
        src = cls.closed_extents.size()
        pc = piece.closed_extents.size()
        s_min = min(v.scale for v in cls.variant_params)
        p_max = max(v.scale for v in piece.variant_params)
        spacing = s_min * src.x / cls.slice_count
        assert p_max * pc.x <= spacing + 1e-9, cls.category
        assert p_max * pc.z <= s_min * src.z + 1e-9, cls.category


def test_variant_params_match_counts(catalog):
    for cls in catalog.classes.values():
        assert len(cls.variant_params) == cls.num_variants
        for v in cls.variant_params:
            assert all(0.0 <= c <= 1.0 for c in v.color)
            assert 0.5 < v.scale < 1.5


def test_statue_movable_cabinet_static(catalog):
    assert catalog.get("Statue").movable
    assert not catalog.get("Cabinet").movable


def test_shower_door_transparent_openable(catalog):
    door = catalog.get("ShowerDoor")
    assert door.transparent and door.openable


def test_catalog_json_round_trip(catalog):
    text = catalog.to_json()
    again = ObjectClassCatalog.from_json(text)
    assert again.classes == catalog.classes
    assert again.to_json() == text


def test_default_catalog_cached():
    assert default_catalog() is default_catalog()
