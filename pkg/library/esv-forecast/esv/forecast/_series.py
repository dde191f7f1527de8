import csv
import math
from pathlib import Path
from typing import Iterable, Optional, Tuple, Union

import attrs
import numpy as np
from esv.models import ParseError
from typing_extensions import Self

from ._errors import DegenerateBounds, InsufficientData, InvalidSeries

__all__ = (
    'SeriesDataset',
    'read_series',
)


def _to_years(value: Iterable[int]) -> Tuple[int, ...]:
    return tuple(int(year) for year in value)


def _to_values(value: Iterable[float]) -> Tuple[float, ...]:
    return tuple(float(v) for v in value)


@attrs.define(frozen=True, kw_only=True)
class SeriesDataset:
    """A yearly series with the bounds it is scaled to [0, 1] by.

    Attributes:
        years: Strictly increasing years.
        values: One value per year, in original units.
        bounds: `(low, high)` mapped to 0 and 1 respectively.
    """

    years: Tuple[int, ...] = attrs.field(converter=_to_years)
    values: Tuple[float, ...] = attrs.field(converter=_to_values)
    bounds: Tuple[float, float] = attrs.field(converter=_to_values)

    def __attrs_post_init__(self) -> None:
        if len(self.years) != len(self.values):
            raise InvalidSeries(
                f'{len(self.years)} years do not match {len(self.values)} values'
            )
        if any(b <= a for a, b in zip(self.years, self.years[1:])):
            raise InvalidSeries('Years must be strictly increasing')
        if not all(math.isfinite(v) for v in self.values):
            raise InvalidSeries('Series values must be finite')

        low, high = self.bounds
        if not high > low:
            raise DegenerateBounds(
                f'Cannot scale by bounds ({low!r}, {high!r}); the maximum must be larger'
            )

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def from_points(
        cls,
        points: Iterable[Tuple[int, float]],
        bounds: Optional[Tuple[float, float]] = None
    ) -> Self:
        """Build a dataset from `(year, value)` pairs.

        Parameters:
            points: The pairs, ordered by year.
            bounds: Scaling bounds; the minimum and maximum of the values if
                not given.

        Raises:
            DegenerateBounds: No bounds were given and the series is constant.
        """
        pairs = list(points)
        years = [year for year, _ in pairs]
        values = [value for _, value in pairs]

        if bounds is None:
            if not values:
                raise InvalidSeries('Cannot derive bounds of an empty series')
            bounds = (min(values), max(values))

        return cls(years=years, values=values, bounds=bounds)

    def normalize(self, values: Union[float, np.ndarray]) -> np.ndarray:
        low, high = self.bounds
        return (np.asarray(values, dtype=float) - low) / (high - low)

    def denormalize(self, scaled: Union[float, np.ndarray]) -> np.ndarray:
        low, high = self.bounds
        return np.asarray(scaled, dtype=float) * (high - low) + low

    @property
    def scaled(self) -> np.ndarray:
        """The values scaled by the bounds."""
        return self.normalize(np.array(self.values))

    def windows(self, window: int) -> Tuple[np.ndarray, np.ndarray]:
        """Cut the scaled series into supervised windows.

        Parameters:
            window: Number of consecutive points fed to predict the next one.

        Raises:
            InsufficientData: The series has no more points than `window`.

        Returns:
            Inputs of shape `(samples, window, 1)` and targets of shape
            `(samples,)`.
        """
        if window < 1:
            raise ValueError(f'The window must hold at least one point, got {window!r}')
        if len(self) <= window:
            raise InsufficientData(len(self), window)

        scaled = self.scaled
        starts = range(len(scaled) - window)

        inputs = np.stack([scaled[s:s + window] for s in starts])[:, :, np.newaxis]
        targets = scaled[window:]
        return inputs, targets


def read_series(
    path: Union[str, Path],
    quantity: str = 'total_unit_value',
    bounds: Optional[Tuple[float, float]] = None
) -> SeriesDataset:
    """Read one column of a comma-separated series file.

    The file has a header row naming a `year` column and one column per
    quantity.

    Parameters:
        path: The file to read.
        quantity: The column to read the values from.
        bounds: Optional scaling bounds, see `SeriesDataset.from_points()`.

    Raises:
        ParseError: The file cannot be read or a row does not parse.
    """
    field = str(path)
    try:
        with open(path, newline='', encoding='utf-8') as file:
            reader = csv.DictReader(file)
            if reader.fieldnames is None or 'year' not in reader.fieldnames:
                raise ParseError(field, 'missing the year column', line=1)
            if quantity not in reader.fieldnames:
                raise ParseError(field, f'missing the {quantity!r} column', line=1)

            points = []
            for row in reader:
                try:
                    points.append((int(row['year']), float(row[quantity])))
                except (TypeError, ValueError):
                    raise ParseError(
                        field, f'cannot parse {quantity!r} row', line=reader.line_num
                    ) from None
    except OSError as exc:
        raise ParseError(field, f'cannot read file: {exc.strerror}') from exc

    return SeriesDataset.from_points(points, bounds)
