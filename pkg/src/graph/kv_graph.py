"""KV verification chain as a LangGraph state machine: solve, then check each identity in turn."""
import copy
import logging
from typing import List, Literal, Optional

from langgraph.graph import END, StateGraph

from src.kv import (
    density_flow_residual,
    dzt_residual,
    homotopy_check,
    kv1_residual,
    kv2_residual,
    load_pair,
    solve_kv,
)
from src.liealg import LieAlgebra, load_lie_algebra, parse_polynomial
from src.models import CheckRecord, KVPipelineState, PipelineLogEntry, create_initial_pipeline_state
from src.types import PipelineStage

logger = logging.getLogger(__name__)

_NEXT_STAGE = {
    PipelineStage.SOLVE.value: PipelineStage.KV1,
    PipelineStage.KV1.value: PipelineStage.KV2,
    PipelineStage.KV2.value: PipelineStage.DZT,
    PipelineStage.DZT.value: PipelineStage.HOMOTOPY,
}


def _algebras(state: KVPipelineState) -> List[LieAlgebra]:
    return [load_lie_algebra(source) for source in state["algebras"]]


def _wants_homotopy(state: KVPipelineState) -> bool:
    return bool(state["homotopy_lie"] and state["homotopy_inputs"])


def _record(new_state: KVPipelineState, record: CheckRecord) -> None:
    new_state["checks"].append(record.model_dump(mode="json"))
    new_state["pipeline_log"].append(
        PipelineLogEntry(
            stage=record.stage.value,
            event_type="check",
            message=f"{record.name}: {'passed' if record.passed else 'FAILED'}",
            details=record.detail,
        )
    )
    if not record.passed:
        new_state["failed"] = True
        logger.warning("check %s failed: %s", record.name, record.detail)


def solve_pair(state: KVPipelineState) -> KVPipelineState:
    """Load the pair from disk or solve KV1 (and KV2 on every requested algebra)."""
    new_state = copy.deepcopy(state)
    new_state["stage"] = PipelineStage.SOLVE.value
    if new_state["pair_source"]:
        pair = load_pair(new_state["pair_source"])
        new_state["pipeline_log"].append(
            PipelineLogEntry(
                stage=PipelineStage.SOLVE.value,
                event_type="solve",
                message=f"loaded KV pair of order {pair.order} from {new_state['pair_source']}",
                details={"order": pair.order},
            )
        )
        new_state["pair"] = pair
        return new_state

    algebras = _algebras(new_state)
    # KV2 and the homotopy formula at degree N need F, G through degree N
    order = new_state["order"] + 1 if algebras else new_state["order"]
    solution = solve_kv(order, algebras)
    new_state["pair"] = solution.pair
    new_state["pipeline_log"].append(
        PipelineLogEntry(
            stage=PipelineStage.SOLVE.value,
            event_type="solve",
            message=f"solved KV pair of order {order}",
            details={
                "order": order,
                "algebras": [g.label for g in algebras],
                "kernel_dimensions": {str(k): len(v) for k, v in solution.kernels.items()},
            },
        )
    )
    for degree in solution.fallback_degrees:
        new_state["pipeline_log"].append(
            PipelineLogEntry(
                stage=PipelineStage.SOLVE.value,
                event_type="fallback",
                message=f"degree {degree} solved without the symmetric tie-break",
                details={"degree": degree},
            )
        )
    return new_state


def check_kv1(state: KVPipelineState) -> KVPipelineState:
    new_state = copy.deepcopy(state)
    new_state["stage"] = PipelineStage.KV1.value
    pair = new_state["pair"]
    residual = kv1_residual(pair.F, pair.G, pair.order)
    _record(
        new_state,
        CheckRecord(
            stage=PipelineStage.KV1,
            name="kv1_residual",
            passed=residual.is_zero(),
            detail={"order": pair.order, "F": pair.F.to_text(), "G": pair.G.to_text(), "residual": residual.to_text()},
        ),
    )
    return new_state


def check_kv2(state: KVPipelineState) -> KVPipelineState:
    new_state = copy.deepcopy(state)
    new_state["stage"] = PipelineStage.KV2.value
    pair = new_state["pair"]
    flow_label = load_lie_algebra(new_state["homotopy_lie"]).label if _wants_homotopy(new_state) else None
    for g in _algebras(new_state):
        residual = kv2_residual(g, pair, new_state["order"])
        _record(
            new_state,
            CheckRecord(
                stage=PipelineStage.KV2,
                name=f"kv2_residual[{g.label}]",
                passed=residual.is_zero(),
                detail={"order": new_state["order"], "algebra": g.label, "residual": residual.to_text()},
            ),
        )
        if g.label == flow_label:
            flow = density_flow_residual(g, pair, new_state["order"])
            _record(
                new_state,
                CheckRecord(
                    stage=PipelineStage.KV2,
                    name=f"density_flow_residual[{g.label}]",
                    passed=flow.is_zero(),
                    detail={"order": new_state["order"], "algebra": g.label, "residual": flow.to_text()},
                ),
            )
    return new_state


def check_dzt(state: KVPipelineState) -> KVPipelineState:
    new_state = copy.deepcopy(state)
    new_state["stage"] = PipelineStage.DZT.value
    pair = new_state["pair"]
    order = min(new_state["order"], pair.order)
    residual = dzt_residual(pair, order)
    _record(
        new_state,
        CheckRecord(
            stage=PipelineStage.DZT,
            name="dzt_residual",
            passed=residual.is_zero(),
            detail={"order": order, "residual": residual.to_text()},
        ),
    )
    return new_state


def check_homotopy(state: KVPipelineState) -> KVPipelineState:
    new_state = copy.deepcopy(state)
    new_state["stage"] = PipelineStage.HOMOTOPY.value
    g = load_lie_algebra(new_state["homotopy_lie"])
    f1, f2 = (parse_polynomial(text, g.dim) for text in new_state["homotopy_inputs"])
    result = homotopy_check(g, new_state["pair"], f1, f2, new_state["order"])
    new_state["homotopy"] = {
        "lhs": result.lhs.to_text(),
        "rhs": result.rhs.to_text(),
        "difference": result.difference.to_text(),
    }
    _record(
        new_state,
        CheckRecord(
            stage=PipelineStage.HOMOTOPY,
            name=f"homotopy[{g.label}]",
            passed=result.difference.is_zero(),
            detail={"order": new_state["order"], "f1": f1.to_text(), "f2": f2.to_text(), **new_state["homotopy"]},
        ),
    )
    return new_state


def finish(state: KVPipelineState) -> KVPipelineState:
    """Log skipped stages and close the run."""
    new_state = copy.deepcopy(state)
    checked = {record["stage"] for record in new_state["checks"]}
    if not new_state["failed"]:
        requested = {PipelineStage.KV2: bool(new_state["algebras"]), PipelineStage.HOMOTOPY: _wants_homotopy(new_state)}
        for stage, wanted in requested.items():
            if not wanted and stage.value not in checked:
                new_state["pipeline_log"].append(
                    PipelineLogEntry(stage=stage.value, event_type="skip", message=f"{stage.value} not requested", details={})
                )
    new_state["is_finished"] = True
    new_state["pipeline_log"].append(
        PipelineLogEntry(
            stage="finish",
            event_type="finish",
            message="KV pipeline failed" if new_state["failed"] else "all KV checks passed",
            details={"checks": len(new_state["checks"])},
        )
    )
    logger.info("KV pipeline finished with %d checks, failed=%s", len(new_state["checks"]), new_state["failed"])
    return new_state


def should_continue(state: KVPipelineState) -> Literal["continue", "skip", "end"]:
    """Stop on a failed check; jump over a stage nobody asked for."""
    if state["failed"]:
        return "end"
    upcoming = _NEXT_STAGE.get(state["stage"])
    if upcoming is PipelineStage.KV2 and not state["algebras"]:
        return "skip"
    if upcoming is PipelineStage.HOMOTOPY and not _wants_homotopy(state):
        return "skip"
    return "continue"


def create_kv_graph():
    """Create and compile the KV verification graph."""

    def get_initial_state(state: Optional[KVPipelineState]) -> KVPipelineState:
        if state is None or (isinstance(state, dict) and "order" not in state):
            return create_initial_pipeline_state(3)
        return state

    graph = StateGraph(KVPipelineState)

    graph.add_node("initialize", get_initial_state)
    graph.add_node("solve", solve_pair)
    graph.add_node("check_kv1", check_kv1)
    graph.add_node("check_kv2", check_kv2)
    graph.add_node("check_dzt", check_dzt)
    graph.add_node("check_homotopy", check_homotopy)
    graph.add_node("finish", finish)

    graph.set_entry_point("initialize")
    graph.add_edge("initialize", "solve")
    graph.add_conditional_edges("solve", should_continue, {"continue": "check_kv1", "skip": "check_kv1", "end": "finish"})
    graph.add_conditional_edges("check_kv1", should_continue, {"continue": "check_kv2", "skip": "check_dzt", "end": "finish"})
    graph.add_conditional_edges("check_kv2", should_continue, {"continue": "check_dzt", "skip": "check_dzt", "end": "finish"})
    graph.add_conditional_edges("check_dzt", should_continue, {"continue": "check_homotopy", "skip": "finish", "end": "finish"})
    graph.add_edge("check_homotopy", "finish")
    graph.add_edge("finish", END)

    return graph.compile()


kv_graph = create_kv_graph()


def run_kv_pipeline(
    order: int,
    algebras: Optional[List[str]] = None,
    homotopy_lie: Optional[str] = None,
    homotopy_inputs=None,
    pair_source: Optional[str] = None,
) -> KVPipelineState:
    """Run the graph from a fresh state and return the final state."""
    initial = create_initial_pipeline_state(order, algebras, homotopy_lie, homotopy_inputs, pair_source)
    return kv_graph.invoke(initial)
