import pytest
from hypothesis import given
from hypothesis import strategies as st

from chemsearch.querylang import (
    ComponentParseError,
    EmptyQuery,
    WrongSeparatorCount,
    parse_query,
    parse_reaction_smarts,
    tokenize_iupac,
)


class TestReactionSmarts:
    def test_three_sections(self):
        q = parse_reaction_smarts("CC(=O)O.OCC>[H+]>CC(=O)OCC")
        assert q.reactants == ["CC(=O)O", "OCC"]
        assert q.agents == ["[H+]"]
        assert q.products == ["CC(=O)OCC"]

    def test_empty_sections(self):
        q = parse_reaction_smarts(">>C")
        assert (q.reactants, q.agents, q.products) == ([], [], ["C"])

    def test_wrong_separator_count(self):
        with pytest.raises(WrongSeparatorCount):
            parse_reaction_smarts("C>C")
        with pytest.raises(WrongSeparatorCount):
            parse_reaction_smarts("C>C>C>C")

    def test_component_error_carries_position(self):
        with pytest.raises(ComponentParseError) as err:
            parse_reaction_smarts("CC.C1CC>>O")
        assert err.value.component == "C1CC"
        assert err.value.section == "reactants"
        assert err.value.index == 1

    def test_rejoin_reproduces_input(self):
        for raw in ["CC(=O)O.OCC>[H+]>CC(=O)OCC", ">>C", "C.C>>O.N", "CCO>>"]:
            q = parse_reaction_smarts(raw)
            rejoined = ">".join(".".join(s) for s in (q.reactants, q.agents, q.products))
            assert rejoined == raw

    def test_component_total(self):
        q = parse_reaction_smarts("C.CC>O>N.O.C")
        assert len(q.all_components()) == 6


class TestIupacTokenizer:
    def test_printed_example(self):
        name = "N-((E)-2-bromo-2-phenylvinyl)-cinnamamide"
        assert tokenize_iupac(name) == ["N", "E", "2", "bromo", "2", "phenyl", "vinyl", "cinnamamide"]

    def test_greedy_segmentation(self):
        assert tokenize_iupac("2,3-dimethylbutane") == ["2", "3", "di", "methyl", "butane"]

    def test_single_vocabulary_word(self):
        assert tokenize_iupac("benzene") == ["benzene"]

    def test_unmatched_run_kept_whole(self):
        # "cinnamamide" has vocabulary suffixes but no left-anchored cover
        assert tokenize_iupac("cinnamamide") == ["cinnamamide"]

    def test_single_letter_locants_keep_case(self):
        assert tokenize_iupac("(E)-N-methyl") == ["E", "N", "methyl"]

    def test_bracketed_ring_fusion_name(self):
        assert tokenize_iupac("benzo[b]thiophen-2-ylboronic acid") == [
            "benzo", "b", "thiophen", "2", "yl", "boronic", "acid",
        ]

    @given(st.text(alphabet=st.characters(whitelist_categories=("Lu", "Ll", "Nd"),
                                          whitelist_characters="-()[],' "), max_size=40))
    def test_never_returns_empty_tokens(self, name):
        tokens = tokenize_iupac(name)
        assert all(tokens)
        assert tokens == tokenize_iupac(name)  # deterministic


class TestParseQuery:
    def test_text_and_reaction(self):
        q = parse_query(text="Burke group", reaction="Brc1ccccc1.OB(O)c1ccccc1>>Cc1ccccc1", k=10)
        assert q.text == "Burke group"
        assert q.reaction is not None
        assert len(q.all_smiles()) == 3

    def test_structure_only(self):
        q = parse_query(smiles_csv="C1=CC=C2C(=C1)C3=CC=CC=C3S2", k=10)
        assert q.text is None and q.smiles and q.reaction is None

    def test_empty_query(self):
        with pytest.raises(EmptyQuery):
            parse_query()
        with pytest.raises(EmptyQuery):
            parse_query(text="   ", smiles_csv="", reaction=None)

    def test_default_k(self):
        assert parse_query(text="x").k == 10

    def test_bad_k(self):
        with pytest.raises(ValueError):
            parse_query(text="x", k=0)

    def test_bad_smiles_propagates(self):
        with pytest.raises(ComponentParseError):
            parse_query(smiles_csv="CCO,C1CC")
