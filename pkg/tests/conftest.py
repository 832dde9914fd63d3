import pytest

from matchbook import CandidateEntry, LiquidityStatus, PreferenceBook


def make_book(rows, owner="F"):
    """rows: (id, v, c, status) tuples with status in {'h', 'k', 'l'}."""
    status = {
        "h": LiquidityStatus.HYPOTHETICAL,
        "k": LiquidityStatus.LOCKUP,
        "l": LiquidityStatus.LIQUID,
    }
    return PreferenceBook(
        entries=tuple(CandidateEntry(i, v, c, status[s]) for i, v, c, s in rows),
        owner_id=owner,
    )


@pytest.fixture
def worked_book():
    """The five-row worked example: a hypothetical ideal, a locked-up
    second-best, and three liquid bids with standing offers."""
    return make_book(
        [
            ("H", 95.0, 0.0, "h"),
            ("B", 88.0, 0.0, "k"),
            ("C", 78.0, 200.0, "l"),
            ("D", 72.0, 300.0, "l"),
            ("E", 60.0, 0.0, "l"),
        ]
    )
