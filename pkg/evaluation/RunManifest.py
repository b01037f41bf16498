import json
from dataclasses import asdict, dataclass, field

from evaluation.exporters import to_jsonable

VERSION = "1.0.0"


@dataclass
class RunManifest:
    command: str
    parameters: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    classifications: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    version: str = VERSION

    def add_output(self, path):
        path = str(path)
        if path not in self.outputs:
            self.outputs.append(path)
        return path

    def to_json(self):
        return json.dumps(to_jsonable(asdict(self)), indent=2, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))

    def write(self, path):
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.to_json() + "\n")

    @classmethod
    def read(cls, path):
        with open(path, encoding="utf-8") as f:
            return cls.from_json(f.read())
