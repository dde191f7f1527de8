import hashlib
from pathlib import Path
from typing import Any, Dict, List, Mapping, Union

import attrs
from esv.appraisal import CostBenefitReport
from esv.fuzzy import FuzzyResult
from esv.models import ParseError, WeightVector, dump_json, read_json_file
from esv.valuation import ServiceValuation
from esv.weights import EntropyReport
from typing_extensions import Final, Self

__all__ = (
    'RECORD_VERSION',
    'RunRecord',
    'load_record',
)


RECORD_VERSION: Final[int] = 1

# Fields that differ between two runs of the same scenario.
_RUN_METADATA: Final = ('timestamp', 'version')


@attrs.define(frozen=True, kw_only=True, eq=False)
class RunRecord:
    """Everything a run of the pipeline produced.

    Attributes:
        scenario_name: Name of the scenario that was run.
        scenario_digest: SHA-256 of the canonical scenario document.
        timestamp: When the run finished, in ISO 8601 with a UTC offset.
        version: Version of the toolkit that ran it.
        entropy: Every intermediate of the indicator weights.
        factor_weights: The weights of the five factors used.
        sub_weights: The weights of the sub-factors within each factor.
        fuzzy: The fuzzy evaluation.
        valuation: The value of the services.
        cost_benefit: The benefit-cost comparison.
    """

    scenario_name: str
    scenario_digest: str
    timestamp: str
    version: str
    entropy: EntropyReport
    factor_weights: WeightVector
    sub_weights: List[WeightVector] = attrs.field(converter=list)
    fuzzy: FuzzyResult
    valuation: ServiceValuation
    cost_benefit: CostBenefitReport

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented

        return self.to_data() == other.to_data()

    def to_data(self) -> Dict[str, Any]:
        return {
            'record_version': RECORD_VERSION,
            'scenario_name': self.scenario_name,
            'scenario_digest': self.scenario_digest,
            'timestamp': self.timestamp,
            'version': self.version,
            'entropy': self.entropy.to_data(),
            'factor_weights': list(self.factor_weights),
            'sub_weights': [list(weights) for weights in self.sub_weights],
            'fuzzy': self.fuzzy.to_data(),
            'valuation': self.valuation.to_data(),
            'cost_benefit': self.cost_benefit.to_data(),
        }

    @classmethod
    def from_data(cls, data: Mapping[str, Any]) -> Self:
        if data.get('record_version') != RECORD_VERSION:
            raise ParseError('record_version', f'expected {RECORD_VERSION}')

        try:
            return cls(
                scenario_name=data['scenario_name'],
                scenario_digest=data['scenario_digest'],
                timestamp=data['timestamp'],
                version=data['version'],
                entropy=EntropyReport.from_data(data['entropy']),
                factor_weights=WeightVector(data['factor_weights']),
                sub_weights=[WeightVector(weights) for weights in data['sub_weights']],
                fuzzy=FuzzyResult.from_data(data['fuzzy']),
                valuation=ServiceValuation.from_data(data['valuation']),
                cost_benefit=CostBenefitReport.from_data(data['cost_benefit']),
            )
        except KeyError as exc:
            raise ParseError(str(exc.args[0]), 'missing field') from None

    def numeric_payload(self) -> bytes:
        """Canonical JSON of the record without the metadata of the run.

        Two runs of the same scenario have byte-identical payloads.
        """
        data = self.to_data()
        for key in _RUN_METADATA:
            del data[key]
        return dump_json(data).encode('utf-8')

    def payload_digest(self) -> str:
        """SHA-256 of `numeric_payload()`."""
        return hashlib.sha256(self.numeric_payload()).hexdigest()


def load_record(path: Union[str, Path]) -> RunRecord:
    """Load a record written in the structured format.

    Raises:
        ParseError: The file is missing or is not a record.
    """
    return RunRecord.from_data(read_json_file(path, str(path)))
