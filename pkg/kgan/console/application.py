from cleo.application import Application

from kgan.__version__ import __version__
from .evaluate import CompareCommand, EvaluateCommand
from .gen_data import GenerateDataCommand
from .gradcheck import GradcheckCommand
from .train import TrainStudentCommand, TrainTeacherCommand

application = Application(
    name="kgan",
    version=__version__,
)
application.add(GenerateDataCommand())
application.add(TrainTeacherCommand())
application.add(TrainStudentCommand())
application.add(EvaluateCommand())
application.add(CompareCommand())
application.add(GradcheckCommand())


def main() -> None:
    application.run()


if __name__ == "__main__":
    main()
