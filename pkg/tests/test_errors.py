"""Unit tests for errors module."""

import pickle

from potsolver.errors import InputError, ParseError, PotError, SolveTimeout
from potsolver.solver import SolveStats


class TestErrors:
    """Test cases for the exception hierarchy."""

    def test_hierarchy(self):
        """Test input errors are value errors and pot errors."""
        assert issubclass(ParseError, InputError)
        assert issubclass(InputError, ValueError)
        assert issubclass(InputError, PotError)

    def test_parse_error_line_prefix(self):
        """Test the line number prefix."""
        assert str(ParseError("bad tag", 4)) == "line 4: bad tag"
        assert str(ParseError("missing header")) == "missing header"

    def test_pickle_round_trip(self):
        """Test errors survive transfer out of worker processes."""
        err = pickle.loads(pickle.dumps(ParseError("bad tag", 4)))
        assert err.line == 4 and str(err) == "line 4: bad tag"
        timeout = pickle.loads(pickle.dumps(SolveTimeout("deadline", SolveStats(leaves=9))))
        assert timeout.stats.leaves == 9
