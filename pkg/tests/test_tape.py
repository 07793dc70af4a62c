import io
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vawar.errors import (
    EmptyTape,
    InsufficientHistory,
    MalformedRow,
    NonFinite,
    NonPositiveField,
    NonUniformSpacing,
    ValueMismatch,
    WindowOutOfRange,
)
from vawar.tape import (
    DERIVE_VALUE,
    WITH_VALUE,
    LagSpec,
    TradeTape,
    TradeTick,
    WindowSpec,
    infer_epsilon,
    ingest,
    resolve,
    write_csv,
)

from conftest import FIXTURE_CSV


class TestIngest:
    def test_derive_value(self):
        tape = ingest(FIXTURE_CSV, DERIVE_VALUE, epsilon=1.0)
        assert len(tape) == 4
        assert tape.values.tolist() == [20.0, 10.0, 40.0, 10.0]

    def test_zero_volume_rejected(self):
        csv = "time,price,volume\n0,2,10\n1,2,0\n"
        with pytest.raises(NonPositiveField, match="row 3"):
            ingest(csv, DERIVE_VALUE, epsilon=1.0)

    def test_supplied_value_mismatch(self):
        csv = "time,price,volume,value\n0,2,10,19.9\n"
        with pytest.raises(ValueMismatch, match="row 2"):
            ingest(csv, WITH_VALUE, epsilon=1.0)

    def test_supplied_value_within_tolerance(self):
        csv = "time,price,volume,value\n0,2,10,20\n1,2,5,10\n"
        tape = ingest(csv, WITH_VALUE, epsilon=1.0)
        assert tape.values.tolist() == [20.0, 10.0]

    def test_derive_ignores_value_column(self):
        csv = "time,price,volume,value\n0,2,10,19.9\n1,2,5,10\n"
        tape = ingest(csv, DERIVE_VALUE, epsilon=1.0)
        assert tape.values.tolist() == [20.0, 10.0]

    def test_nonuniform_spacing(self):
        csv = "time,price,volume\n0,2,10\n1,2,5\n2.5,4,10\n"
        with pytest.raises(NonUniformSpacing, match="row 4"):
            ingest(csv, DERIVE_VALUE, epsilon=1.0)

    def test_empty(self):
        with pytest.raises(EmptyTape):
            ingest("time,price,volume\n", DERIVE_VALUE, epsilon=1.0)
        with pytest.raises(EmptyTape):
            ingest("", DERIVE_VALUE, epsilon=1.0)

    def test_bad_header(self):
        with pytest.raises(MalformedRow, match="row 1"):
            ingest("price,volume\n1,2\n", DERIVE_VALUE, epsilon=1.0)

    def test_with_value_needs_column(self):
        with pytest.raises(MalformedRow):
            ingest(FIXTURE_CSV, WITH_VALUE, epsilon=1.0)

    def test_unparsable_cell(self):
        csv = "time,price,volume\n0,2,10\n1,abc,5\n"
        with pytest.raises(NonFinite, match="row 3"):
            ingest(csv, DERIVE_VALUE, epsilon=1.0)

    def test_wrong_column_count(self):
        csv = "time,price,volume\n0,2,10\n1,2\n"
        with pytest.raises(MalformedRow, match="row 3"):
            ingest(csv, DERIVE_VALUE, epsilon=1.0)

    def test_stream_input(self):
        tape = ingest(io.StringIO(FIXTURE_CSV), DERIVE_VALUE, epsilon=1.0)
        assert len(tape) == 4

    def test_roundtrip_bit_for_bit(self):
        rng = np.random.default_rng(42)
        prices = np.exp(rng.normal(0, 0.3, 50)) * 37.1234567890123
        volumes = np.exp(rng.normal(0, 1.0, 50)) * 12345.6789
        original = TradeTape.from_arrays(prices, volumes, epsilon=0.5)
        buf = io.StringIO()
        write_csv(original, buf)
        again = ingest(buf.getvalue(), WITH_VALUE, epsilon=0.5)
        for field in ("times", "prices", "volumes", "values"):
            assert getattr(original, field).tolist() == getattr(again, field).tolist()


class TestTick:
    def test_fields_validated(self):
        with pytest.raises(NonPositiveField):
            TradeTick(index=0, time=0.0, price=-1.0, volume=1.0, value=1.0)
        with pytest.raises(NonFinite):
            TradeTick(index=0, time=0.0, price=math.inf, volume=1.0, value=1.0)
        with pytest.raises(ValueMismatch):
            TradeTick(index=0, time=0.0, price=2.0, volume=10.0, value=19.9)

    def test_tape_indexing(self, tape_a):
        tick = tape_a[2]
        assert tick.index == 2
        assert tick.price == 4.0
        assert tick.value == 40.0
        assert len(tape_a.ticks) == 4

    def test_arrays_read_only(self, tape_a):
        with pytest.raises(ValueError):
            tape_a.prices[0] = 99.0


class TestResolve:
    def test_fixture_window(self, tape_a):
        window = resolve(tape_a, WindowSpec(1, 3), LagSpec(1))
        assert window.indices.tolist() == [1, 2, 3]
        assert window.lagged_prices().tolist() == [2.0, 2.0, 4.0]

    def test_insufficient_history(self, tape_a):
        with pytest.raises(InsufficientHistory):
            resolve(tape_a, WindowSpec(0, 3), LagSpec(1))

    def test_window_out_of_range(self, tape_a):
        with pytest.raises(WindowOutOfRange):
            resolve(tape_a, WindowSpec(1, 4), LagSpec(1))

    def test_degenerate_specs(self):
        with pytest.raises(WindowOutOfRange):
            WindowSpec(start=-1, count=3)
        with pytest.raises(WindowOutOfRange):
            WindowSpec(start=0, count=1)
        with pytest.raises(ValueError):
            LagSpec(lag_l=0)
        with pytest.raises(ValueError):
            LagSpec(lag_l=1, window_shift_j=-1)

    @given(
        ticks=st.integers(3, 80),
        count=st.integers(2, 40),
        start=st.integers(0, 60),
        lag=st.integers(1, 6),
    )
    def test_lagged_indices_always_valid(self, ticks, count, start, lag):
        prices = np.linspace(1.0, 2.0, ticks)
        volumes = np.full(ticks, 3.0)
        tape = TradeTape.from_arrays(prices, volumes)
        try:
            window = resolve(tape, WindowSpec(start, count), LagSpec(lag))
        except (InsufficientHistory, WindowOutOfRange):
            assert start < lag or start + count > ticks
            return
        for i in window.indices:
            assert 0 <= i - lag < ticks
        assert window.lagged_prices().shape == (count,)


def test_infer_epsilon():
    assert infer_epsilon(FIXTURE_CSV) == 1.0
    assert infer_epsilon("time,price,volume\n0,1,1\n0.5,1,1\n") == 0.5
    assert infer_epsilon("time,price,volume\n") == 1.0
