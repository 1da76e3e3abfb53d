#!/usr/bin/env python3
"""
Seagrass Patch Classifier
Commands: prepare, train, eval, cv, embed, infer, synth, ablate
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from config import (
    CV_FOLDS, DEFAULT_RUN_CONFIG, INFER_SKIP_TOP, LOG_FILE, LOG_LEVEL, SYNTH_HEIGHT, SYNTH_IMAGES_PER_AREA,
    SYNTH_SUB_AREAS, SYNTH_TEST_AREAS, SYNTH_WIDTH, validate_config
)
from plugins.core import Split, Taxonomy, load_manifest, save_manifest
from plugins.embed import (
    TsneConfig, extract_features, plot_embedding, subsample_features, tsne, write_embedding
)
from plugins.infer import infer_frames
from plugins.ingest import build_manifest, read_subarea_list, split_by_subarea
from plugins.nn import checkpoint_load, checkpoint_save
from plugins.synth import SynthSpec, synth_dataset
from plugins.tiler import (
    GridSpec, build_patch_dataset, format_counts_table, materialize_patches, write_patch_index
)
from plugins.traineval import (
    DIMENSIONS, ConfusionMatrix, TrainConfig, build_report, cross_validate, density_breakdown,
    format_ablation_table, format_metrics_table, metrics, metrics_row, predict_dataset,
    run_ablation, train, write_json
)
from plugins.utils import RunConfig, SeagrassError, UsageError, setup_logger

logger = logging.getLogger("seagrass")

SPLIT_CHOICES = ("train", "test", "all")


class _Parser(argparse.ArgumentParser):
    """Argument errors surface as UsageError so they share the one-line error format"""

    def error(self, message):
        raise UsageError(message)


class SeagrassCLI:
    """Wires the plugins into the command-line surface"""

    def __init__(self):
        self.parser = self._build_parser()
        self.run_config: Optional[RunConfig] = None

    # =========================================================================
    # PARSER
    # =========================================================================

    def _build_parser(self) -> argparse.ArgumentParser:
        common = _Parser(add_help=False)
        common.add_argument("--config", help="JSON run config (flags override it)")
        common.add_argument("--seed", type=int, help="seed for every stochastic step")
        common.add_argument("--threads", type=int, help="worker budget (1 is bitwise reproducible)")
        common.add_argument("--quiet", action="store_true", help="log errors only")
        common.add_argument("--log-file", default=LOG_FILE, help="rotating log file")

        parser = _Parser(prog="seagrass", description="Weakly-supervised seagrass patch classification")
        commands = parser.add_subparsers(dest="command", metavar="COMMAND")
        commands.required = True

        prepare = commands.add_parser("prepare", parents=[common], help="build a manifest and patch index")
        prepare.add_argument("--root", required=True)
        prepare.add_argument("--taxonomy", choices=("four", "five"))
        prepare.add_argument("--test-subareas", help="file with one test sub-area id per line")
        prepare.add_argument("--out", required=True, help="manifest JSON path")
        prepare.add_argument("--grid")
        prepare.add_argument("--keep-top", action="store_true", help="keep the top grid row")
        prepare.add_argument("--patch-index", help="JSON lines patch index (default: next to the manifest)")
        prepare.add_argument("--materialize", help="also write patch images under this directory")
        prepare.add_argument("--no-verify", action="store_true", help="skip image decoding checks")

        train_cmd = commands.add_parser("train", parents=[common], help="train a classifier")
        self._add_dataset_args(train_cmd)
        self._add_training_args(train_cmd)
        train_cmd.add_argument("--out", required=True, help="checkpoint path")

        eval_cmd = commands.add_parser("eval", parents=[common], help="evaluate a checkpoint")
        self._add_dataset_args(eval_cmd)
        eval_cmd.add_argument("--ckpt", required=True)
        eval_cmd.add_argument("--split", choices=SPLIT_CHOICES, default="test")
        eval_cmd.add_argument("--report", help="JSON report path")
        eval_cmd.add_argument("--exclude-class", action="append", default=[],
                              help="drop patches of this true class before counting (repeatable)")

        cv = commands.add_parser("cv", parents=[common], help="k-fold cross validation")
        self._add_dataset_args(cv)
        self._add_training_args(cv)
        cv.add_argument("--k", type=int, default=CV_FOLDS)
        cv.add_argument("--report", help="JSON report path")

        embed = commands.add_parser("embed", parents=[common], help="t-SNE of penultimate features")
        self._add_dataset_args(embed)
        embed.add_argument("--ckpt", required=True)
        embed.add_argument("--split", choices=SPLIT_CHOICES, default="test")
        embed.add_argument("--out", required=True, help="embedding JSON path")
        embed.add_argument("--plot", help="scatter PNG path")
        embed.add_argument("--perplexity", type=float)
        embed.add_argument("--iterations", type=int)
        embed.add_argument("--max-points", type=int)

        infer = commands.add_parser("infer", parents=[common], help="classify whole frames and render overlays")
        infer.add_argument("--ckpt", required=True)
        infer.add_argument("--input", required=True, help="image file or directory of frames")
        infer.add_argument("--grid", help="grid for inference (default: the training grid)")
        infer.add_argument("--out", required=True, help="output directory")
        infer.add_argument("--skip-top", action="store_true", default=INFER_SKIP_TOP,
                           help="leave the top row unclassified")
        infer.add_argument("--alpha", type=float)
        infer.add_argument("--labels-json", action="store_true", help="write a JSON label grid per frame")

        synth = commands.add_parser("synth", parents=[common], help="generate a synthetic dataset")
        synth.add_argument("--out", required=True)
        synth.add_argument("--taxonomy", choices=("four", "five"))
        synth.add_argument("--sub-areas", type=int, default=SYNTH_SUB_AREAS)
        synth.add_argument("--images-per-area", type=int, default=SYNTH_IMAGES_PER_AREA)
        synth.add_argument("--width", type=int, default=SYNTH_WIDTH)
        synth.add_argument("--height", type=int, default=SYNTH_HEIGHT)
        synth.add_argument("--brightness-shift", type=float, default=0.0)
        synth.add_argument("--test-areas", type=int, default=SYNTH_TEST_AREAS)

        ablate = commands.add_parser("ablate", parents=[common],
                                     help="compare augmentations, heads, backbones or grids")
        self._add_dataset_args(ablate)
        self._add_training_args(ablate)
        ablate.add_argument("--dimension", choices=tuple(DIMENSIONS), required=True)
        ablate.add_argument("--variants", nargs="+")
        ablate.add_argument("--seeds", type=int, nargs="+", default=[0])
        ablate.add_argument("--report", help="JSON report path")
        return parser

    @staticmethod
    def _add_dataset_args(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--manifest", required=True)
        parser.add_argument("--root", help="dataset root (default: the manifest's directory)")

    @staticmethod
    def _add_training_args(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--grid")
        parser.add_argument("--augment", help="none|flip|geometric|color|both")
        parser.add_argument("--head", help="two_layer_drop|two_layer|knn")
        parser.add_argument("--backbone", help="small|vgg16|resnet or a backbone JSON file")
        parser.add_argument("--max-epochs", type=int)
        parser.add_argument("--batch-size", type=int)
        parser.add_argument("--lr", type=float)
        parser.add_argument("--input-size", type=int)

    # =========================================================================
    # HELPERS
    # =========================================================================

    def _resolve_config(self, args: argparse.Namespace) -> RunConfig:
        input_size = getattr(args, "input_size", None)
        flags = {
            "seed": args.seed,
            "threads": args.threads,
            "taxonomy": getattr(args, "taxonomy", None),
            "grid": getattr(args, "grid", None),
            "augment": getattr(args, "augment", None),
            "head": getattr(args, "head", None),
            "backbone": getattr(args, "backbone", None),
            "max_epochs": getattr(args, "max_epochs", None),
            "batch_size": getattr(args, "batch_size", None),
            "initial_lr": getattr(args, "lr", None),
            "input_size": [input_size, input_size] if input_size else None,
            "perplexity": getattr(args, "perplexity", None),
            "iterations": getattr(args, "iterations", None),
            "max_points": getattr(args, "max_points", None),
            "alpha": getattr(args, "alpha", None),
        }
        if getattr(args, "keep_top", False):
            flags["discard_top"] = False
        return RunConfig.resolve(DEFAULT_RUN_CONFIG, args.config, flags)

    def _train_config(self) -> TrainConfig:
        return TrainConfig.from_dict(self.run_config.to_dict())

    def _echo(self) -> Dict[str, Any]:
        return {"config": self.run_config.to_dict(), "seed": self.run_config.seed}

    @staticmethod
    def _load_dataset_manifest(args: argparse.Namespace):
        manifest = load_manifest(args.manifest)
        root = Path(args.root) if args.root else Path(args.manifest).resolve().parent
        return manifest, root

    @staticmethod
    def _splits(name: str) -> Optional[List[Split]]:
        return None if name == "all" else [Split(name)]

    @staticmethod
    def _checkpoint_grid(checkpoint) -> GridSpec:
        return GridSpec.parse(str(checkpoint.config.get("grid", "5x8")),
                              bool(checkpoint.config.get("discard_top", True)))

    # =========================================================================
    # COMMAND HANDLERS
    # =========================================================================

    def _handle_prepare_command(self, args: argparse.Namespace) -> None:
        taxonomy = Taxonomy.from_mode(self.run_config["taxonomy"])
        manifest = build_manifest(args.root, taxonomy, verify_images=not args.no_verify)
        if args.test_subareas:
            manifest = split_by_subarea(manifest, read_subarea_list(args.test_subareas))
        save_manifest(manifest, args.out)
        logger.info(f"💾 Manifest saved to {args.out}")

        grid = GridSpec.parse(self.run_config["grid"], bool(self.run_config["discard_top"]))
        dataset = build_patch_dataset(manifest, grid, args.root, threads=int(self.run_config["threads"]))
        index_path = args.patch_index or str(Path(args.out).with_suffix(".patches.jsonl"))
        write_patch_index(dataset, index_path)
        logger.info(f"💾 Patch index saved to {index_path}")
        if args.materialize:
            materialize_patches(dataset, args.materialize)
        print(format_counts_table(dataset))

    def _handle_train_command(self, args: argparse.Namespace) -> None:
        manifest, root = self._load_dataset_manifest(args)
        config = self._train_config()
        checkpoint, history = train(manifest, config, root)
        checkpoint_save(checkpoint, args.out)
        logger.info(f"💾 Checkpoint saved to {args.out}")
        write_json(dict(self._echo(), history=[record.to_dict() for record in history],
                        metadata=checkpoint.metadata),
                   Path(args.out).with_suffix(".history.json"))

    def _handle_eval_command(self, args: argparse.Namespace) -> None:
        manifest, root = self._load_dataset_manifest(args)
        checkpoint = checkpoint_load(args.ckpt)
        dataset = build_patch_dataset(manifest, self._checkpoint_grid(checkpoint), root,
                                      splits=self._splits(args.split), threads=int(self.run_config["threads"]))
        taxonomy = manifest.taxonomy
        if args.exclude_class:
            dropped = [taxonomy.index_of(name) for name in args.exclude_class]
            dataset = dataset.excluding_labels(dropped)
            logger.info(f"📊 Excluded {', '.join(args.exclude_class)}: {len(dataset)} patches remain")

        predicted = predict_dataset(checkpoint, dataset, threads=int(self.run_config["threads"]))
        confusion = ConfusionMatrix.from_pairs(dataset.labels, predicted, taxonomy.size, taxonomy.names)
        report = metrics(confusion)
        print(format_metrics_table([(args.split, report)], taxonomy.names))
        if args.report:
            document = build_report(
                [metrics_row(args.split, report, confusion)], self.run_config.to_dict(), self.run_config.seed,
                checkpoint=str(args.ckpt), excluded_classes=list(args.exclude_class),
                density=density_breakdown(dataset, predicted),
            )
            write_json(document, args.report)
            logger.info(f"💾 Report saved to {args.report}")

    def _handle_cv_command(self, args: argparse.Namespace) -> None:
        manifest, root = self._load_dataset_manifest(args)
        config = self._train_config()
        result = cross_validate(manifest, config, root, k=args.k, threads=config.threads)
        rows = [(f"fold {index + 1}", report) for index, report in enumerate(result.fold_reports)]
        rows.append(("mean", result.mean))
        print(format_metrics_table(rows, manifest.taxonomy.names))
        if args.report:
            write_json(dict(self._echo(), cross_validation=result.to_dict()), args.report)
            logger.info(f"💾 Report saved to {args.report}")

    def _handle_embed_command(self, args: argparse.Namespace) -> None:
        manifest, root = self._load_dataset_manifest(args)
        checkpoint = checkpoint_load(args.ckpt)
        dataset = build_patch_dataset(manifest, self._checkpoint_grid(checkpoint), root,
                                      splits=self._splits(args.split), threads=int(self.run_config["threads"]))
        seed = self.run_config.seed
        matrix = subsample_features(extract_features(checkpoint, dataset), int(self.run_config["max_points"]), seed)
        config = TsneConfig(
            perplexity=float(self.run_config["perplexity"]),
            iterations=int(self.run_config["iterations"]),
            learning_rate=float(self.run_config["tsne_learning_rate"]),
            seed=seed,
        )
        result = tsne(matrix.rows, config)
        write_embedding(args.out, matrix, result, manifest.taxonomy, self._echo())
        if args.plot:
            plot_embedding(args.plot, matrix, result.embedding, manifest.taxonomy)

    def _handle_infer_command(self, args: argparse.Namespace) -> None:
        checkpoint = checkpoint_load(args.ckpt)
        grid_text = args.grid or str(checkpoint.config.get("grid", "5x8"))
        grid = GridSpec.parse(grid_text, discard_top=args.skip_top)
        infer_frames(
            checkpoint, args.input, args.out, grid,
            alpha=float(self.run_config["alpha"]), labels_json=args.labels_json,
            threads=int(self.run_config["threads"]), extra=self._echo(),
        )

    def _handle_synth_command(self, args: argparse.Namespace) -> None:
        spec = SynthSpec(
            taxonomy=Taxonomy.from_mode(self.run_config["taxonomy"]),
            sub_areas=args.sub_areas,
            images_per_area=args.images_per_area,
            width=args.width,
            height=args.height,
            brightness_shift=args.brightness_shift,
            test_areas=args.test_areas,
            seed=self.run_config.seed,
        )
        manifest = synth_dataset(args.out, spec)
        print(f"{len(manifest)} images, {len(manifest.sub_areas)} sub-areas -> {args.out}")

    def _handle_ablate_command(self, args: argparse.Namespace) -> None:
        manifest, root = self._load_dataset_manifest(args)
        rows = run_ablation(manifest, root, self._train_config(), args.dimension,
                            seeds=args.seeds, variants=args.variants)
        print(format_ablation_table(rows, manifest.taxonomy.names))
        if args.report:
            write_json(dict(self._echo(), dimension=args.dimension, seeds=list(args.seeds),
                            rows=[row.to_dict() for row in rows]), args.report)
            logger.info(f"💾 Report saved to {args.report}")

    # =========================================================================
    # ENTRY
    # =========================================================================

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        """Run one command; returns the process exit code"""
        try:
            args = self.parser.parse_args(argv)
            setup_logger(level=LOG_LEVEL, log_file=args.log_file, quiet=args.quiet)
            self.run_config = self._resolve_config(args)
            if self.run_config.overridden():
                logger.debug(f"Config overrides: {json.dumps(self.run_config.overridden())}")
            handler = getattr(self, f"_handle_{args.command}_command")
            handler(args)
            return 0
        except SeagrassError as e:
            logger.debug("command failed", exc_info=True)
            print(e.one_line(), file=sys.stderr)
            return e.exit_code
        except KeyboardInterrupt:
            logger.info("🛑 Stopped by user")
            return 1
        except Exception as e:
            logger.error(f"❌ Unexpected error: {e}", exc_info=True)
            print(SeagrassError(str(e)).one_line(), file=sys.stderr)
            return SeagrassError.exit_code


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Main function"""
    try:
        validate_config()
    except ValueError as e:
        print(UsageError(str(e)).one_line(), file=sys.stderr)
        sys.exit(UsageError.exit_code)
    sys.exit(SeagrassCLI().run(argv))


if __name__ == "__main__":
    main()
