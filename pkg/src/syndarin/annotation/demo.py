"""Self-contained demo batches for trying the annotation service and UI."""

from __future__ import annotations

import random
from pathlib import Path

from .models import AnnotationTask, FLAG_FLAGGED, FLAG_KEPT
from .store import AnnotationStore

# Armenian sample content so the UI renders real target-language text.
_SAMPLES = [
    {
        "paragraph": "Երևանը Հայաստանի մայրաքաղաքն է և ամենամեծ քաղաքը։ Այն աշխարհի հնագույն քաղաքներից մեկն է։",
        "question": "Ո՞րն է Հայաստանի մայրաքաղաքը։",
        "options": ("Երևանը", "Գյումրին", "Վանաձորը", "Դիլիջանը"),
        "correct_index": 0,
    },
    {
        "paragraph": "Սևանա լիճը Հայաստանի ամենամեծ լիճն է և գտնվում է ծովի մակարդակից մոտ 1900 մետր բարձրության վրա։",
        "question": "Ի՞նչ բարձրության վրա է գտնվում Սևանա լիճը։",
        "options": ("Մոտ 1900 մետր", "Մոտ 900 մետր", "Մոտ 2900 մետր", "Մոտ 500 մետր"),
        "correct_index": 0,
    },
    {
        "paragraph": "Արարատ լեռը բաղկացած է երկու գագաթից՝ Մեծ Արարատից և Փոքր Արարատից։",
        "question": "Քանի՞ գագաթից է բաղկացած Արարատ լեռը։",
        "options": ("Մեկ", "Երկու", "Երեք", "Չորս"),
        "correct_index": 1,
    },
    {
        "paragraph": "Հայոց այբուբենը ստեղծել է Մեսրոպ Մաշտոցը 405 թվականին։",
        "question": "Ո՞վ է ստեղծել հայոց այբուբենը։",
        "options": ("Մովսես Խորենացին", "Գրիգոր Նարեկացին", "Մեսրոպ Մաշտոցը", "Սահակ Պարթևը"),
        "correct_index": 2,
    },
    {
        "paragraph": "Դուդուկը հայկական փողային նվագարան է, որը պատրաստվում է ծիրանենու փայտից։",
        "question": "Ինչի՞ց է պատրաստվում դուդուկը։",
        "options": ("Կաղնու փայտից", "Ծիրանենու փայտից", "Մետաղից", "Եղեգից"),
        "correct_index": 1,
    },
    {
        "paragraph": "Գառնիի տաճարը հունահռոմեական ոճի միակ կանգուն կառույցն է Հայաստանում։",
        "question": "Ինչպիսի՞ ոճի կառույց է Գառնիի տաճարը։",
        "options": ("Գոթական", "Բյուզանդական", "Հունահռոմեական", "Բարոկկո"),
        "correct_index": 2,
    },
]


def seed_demo_batch(
    data_dir: Path | str, batch_id: str, n_tasks: int = 5, seed: int = 7
) -> list[AnnotationTask]:
    """Create and persist a small batch with a kept/flagged mix."""
    rng = random.Random(seed)
    tasks = []
    for i in range(n_tasks):
        sample = _SAMPLES[i % len(_SAMPLES)]
        flag = FLAG_FLAGGED if rng.random() < 0.4 else FLAG_KEPT
        tasks.append(
            AnnotationTask(
                task_id=f"{batch_id}-t{i:04d}",
                batch_id=batch_id,
                paragraph=sample["paragraph"],
                question=sample["question"],
                options=sample["options"],
                correct_index=sample["correct_index"],
                hidden_flag=flag,
            )
        )
    store = AnnotationStore(data_dir)
    store.save_batch(tasks)
    return tasks
