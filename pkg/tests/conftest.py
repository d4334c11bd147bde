from __future__ import annotations

import random

import pytest

from findialog.augmentation.config import PipelineConfig
from findialog.augmentation.rounds import init_state_dir
from findialog.augmentation.state import StateDir
from findialog.curation.types import QuestionRecord
from findialog.dialogue.types import DialogueRecord, Seed, Turn

REPORT_TOPICS = [
    ("锂业季报", "锂电池", "碳酸锂价格本季度上涨23%，公司毛利率升至41.2%。产能扩张项目一期已投产，"
     "预计年产能达到8万吨。主要风险包括锂价回落与海外矿山政策变化。"),
    ("光伏年报", "光伏组件", "组件出货量同比增长57%，海外收入占比提升至62%。硅料价格下行带动成本改善，"
     "净利润率为9.8%。公司计划投资新建TOPCon电池产线。"),
    ("白酒点评", "高端白酒", "春节动销超预期，批价保持稳定。经销商库存处于历史低位，全年营收指引上调至15%。"
     "需关注消费复苏的持续性与提价节奏。"),
    ("银行深度", "城商银行", "净息差收窄至1.72%，不良率下降到0.88%。零售贷款占比提升，拨备覆盖率达到512%，"
     "资本充足率保持行业领先水平。"),
    ("医药简评", "创新药", "核心产品进入医保目录后放量明显，季度销售额突破12亿元。研发管线中有三个品种处于"
     "III期临床，明年有望提交上市申请。"),
]


def make_report_texts(n: int = 5) -> list[str]:
    texts = []
    for i in range(n):
        title, theme, body = REPORT_TOPICS[i % len(REPORT_TOPICS)]
        paragraphs = [f"{title}（第{i + 1}期）", ""]
        for p in range(3):
            paragraphs.append(f"{theme}研究观点{p + 1}：{body}")
        texts.append("\n".join(paragraphs))
    return texts


@pytest.fixture
def report_dir(tmp_path):
    docs = tmp_path / "reports"
    docs.mkdir()
    for i, text in enumerate(make_report_texts(5)):
        (docs / f"report_{i:02d}.txt").write_text(text, encoding="utf-8")
    return docs


def small_config(**overrides) -> PipelineConfig:
    base = dict(
        max_units=120,
        overlap_units=10,
        seeds_per_round=4,
        target_pairs=3,
        min_pairs=1,
        per_cluster=2,
        max_rounds=2,
        target_dialogues=1000,
        max_uses=3,
        rng_seed=7,
    )
    base.update(overrides)
    return PipelineConfig(**base)


@pytest.fixture
def ingested_state(tmp_path, report_dir):
    statedir = StateDir(tmp_path / "state")
    config = small_config()
    init_state_dir(statedir, config, report_dir)
    return statedir, config


def make_dialogue(dlg_id: str, pair_texts: list[tuple[str, str]], *, round_no: int = 0,
                  seed: Seed | None = None, model: str = "test-model") -> DialogueRecord:
    turns = []
    for q, a in pair_texts:
        turns.append(Turn("investor", q))
        turns.append(Turn("expert", a))
    return DialogueRecord(
        id=dlg_id,
        seed=seed or Seed("report_chunk", "chunk:0", "合成上下文"),
        round=round_no,
        turns=tuple(turns),
        model=model,
        created_at="",
    )


CJK_POOL = (
    "公司市场风险投资增长利润收入成本价格产品技术研发销售渠道品牌客户供应链产能库存"
    "资金负债现金流量毛利净额资产规模行业竞争政策监管海外出口进口汇率利率税收补贴需求"
    "供给波动周期复苏衰退扩张收缩并购重组上市融资分红回购股东管理层战略转型升级创新"
)


def random_cjk_text(rng: random.Random, length: int) -> str:
    return "".join(rng.choice(CJK_POOL) for _ in range(length))


def make_question(qid: str, text: str, **kwargs) -> QuestionRecord:
    return QuestionRecord(id=qid, text=text, **kwargs)
